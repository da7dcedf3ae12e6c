// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subeigen/inner_solver.hpp"
#include "subeigen/mesh.hpp"

namespace subeigen
{

struct SolverConfig
{
  GridPtr grid;
  double p = 2.0;
  double q = 2.0;
  double tol_inner = 0.0;  // 0 selects default_inner_config(p).tol_grad
  double tol_outer = 1e-6;
  double eps_floor = 1e-6;
  int max_outer = 500;
  int max_inner = 100000;
  int max_rayleigh = 50000;
  std::uint64_t seed = 0;
  InnerMethod inner_method = InnerMethod::CgP2;

  InnerConfig inner_config() const;
  double effective_tol_inner() const { return inner_config().tol_grad; }
};

enum class EigenMethod
{
  InverseIteration,
  RayleighMinimization,
};

std::string to_string(EigenMethod method);

struct EigenResult
{
  EigenMethod method = EigenMethod::InverseIteration;
  double lambda_hat = 0.0;
  Field eigenfunction;  // unit L^q norm, nonnegative node sum
  std::vector<double> mu_trace;
  std::vector<double> unorm_trace;
  std::vector<double> change_trace;
  std::vector<int> inner_iters;
  std::vector<double> residual_trace;
  double residual = 0.0;
  bool converged = false;
  int outer_iters = 0;
};

/// p_energy(u) / ||u||_q^p.
double rayleigh_quotient(const Field &u, double p, double q);

/// Positive start: all ones scaled to unit L^q norm.
Field default_start(const GridPtr &grid, double q);

/// Inverse iteration: z = A^{-1} B(w_n), mu_n = ||z||_q^{1-p}, w_{n+1} = z / ||z||_q,
/// so that A(w_{n+1}) = mu_n B(w_n) holds exactly up to the inner tolerance.
EigenResult inverse_iteration(const SolverConfig &cfg, std::optional<Field> w0 = std::nullopt);

/// Monotone descent of the Rayleigh quotient on the unit L^q sphere.
EigenResult rayleigh_minimize(const SolverConfig &cfg, std::optional<Field> u0 = std::nullopt);

}  // namespace subeigen
