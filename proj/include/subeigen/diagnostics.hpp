// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "subeigen/eigensolver.hpp"
#include "subeigen/mesh.hpp"

namespace subeigen
{

enum class BoundCase
{
  I,   // q <= p
  II,  // q > p
};

struct LinfThreshold
{
  double k = 0.0;      // max{k0, 1} in case I, k1 in case II
  double k_raw = 0.0;  // k0 or k1 before clamping
  BoundCase case_tag = BoundCase::I;
  double alpha = 0.0;  // p (1/q - 1/p + 1/nu); only meaningful in case II
};

/// Level-set decay inequality at one level:
///   int_{A(k)} (u - k) <= (lambda S 2^r)^{1/(r-1)} k |A(k)|^{1 + exponent},
/// with r = p, exponent = p / (nu (p - 1)) in case I and r = q,
/// exponent = alpha / (q - 1) in case II.
struct DecayCheck
{
  double k;
  double measure;
  double lhs;
  double rhs;
  bool holds;
};

struct RegularityReport
{
  double sup_norm = 0.0;
  double sobolev_constant = 0.0;
  double l1_norm = 0.0;
  LinfThreshold threshold;
  std::vector<std::pair<double, double>> level_measures;
  std::vector<DecayCheck> decay;
  bool decay_holds = true;
  double min_on_core = 0.0;
  bool positive = false;
};

/// |Omega|^{1/l - 1/p + 1/nu}.
double embedding_volume_factor(double volume, double p, double l, int nu);

/// S = lambda_{p,l}^{-1/p} |Omega|^{-(1/l - 1/p + 1/nu)}, where lambda_{p,l} is
/// the discrete minimum of p_energy(u) / ||u||_l^p.
double sobolev_constant_from_lambda(double lambda, double p, double l, double volume, int nu);

/// Best discrete constant in ||u||_l <= S |Omega|^{1/l-1/p+1/nu} ||grad_H u||_p,
/// obtained by Rayleigh minimization of the (p, l) problem. `base` supplies
/// tolerances and caps; its grid, p and q are replaced.
double estimate_sobolev_constant(const GridPtr &grid, double p, double l,
                                 const SolverConfig &base = {});

LinfThreshold linf_threshold(double lambda, double sobolev, double l1_norm, double p, double q,
                             int nu);

/// |A(k)| = cell volume * #{i : u_i > k}.
double level_set_measure(const Field &u, double k);

/// int_{A(k)} (u - k).
double level_set_excess(const Field &u, double k);

struct PositivityResult
{
  bool positive;
  double c;  // min of u over nodes in the box shrunk by core_shrink about its center
};

PositivityResult positivity_check(const Field &u, double core_shrink = 0.5);

/// Full report for an eigenpair (u normalized internally to unit L^q norm).
RegularityReport regularity_report(const Field &u, double lambda, double p, double q,
                                   double sobolev, double core_shrink = 0.5);

/// ||u||_l / ||grad_H u||_p.
double embedding_ratio(const Field &u, double p, double l);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace subeigen
