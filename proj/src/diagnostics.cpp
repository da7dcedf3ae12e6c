// SPDX-License-Identifier: Apache-2.0

#include "subeigen/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subeigen/error.hpp"

namespace subeigen
{

double embedding_volume_factor(double volume, double p, double l, int nu)
{
  return std::pow(volume, 1.0 / l - 1.0 / p + 1.0 / nu);
}

double sobolev_constant_from_lambda(double lambda, double p, double l, double volume, int nu)
{
  if (!(lambda > 0.0))
    throw Error(ErrorKind::OutOfRange, "Sobolev constant needs a positive eigenvalue");
  return std::pow(lambda, -1.0 / p) / embedding_volume_factor(volume, p, l, nu);
}

double estimate_sobolev_constant(const GridPtr &grid, double p, double l, const SolverConfig &base)
{
  const int nu = grid->group().homogeneous_dim();
  if (const auto why = regime_violation(p, l, nu); !why.empty())
    throw Error(ErrorKind::OutOfRange, "embedding constant " + why);
  SolverConfig cfg = base;
  cfg.grid = grid;
  cfg.p = p;
  cfg.q = l;
  const EigenResult r = rayleigh_minimize(cfg);
  return sobolev_constant_from_lambda(r.lambda_hat, p, l, grid->domain_volume(), nu);
}

LinfThreshold linf_threshold(double lambda, double sobolev, double l1_norm, double p, double q,
                             int nu)
{
  if (!(lambda > 0.0) || !(sobolev > 0.0) || !(l1_norm > 0.0) || !(p > 0.0) || !(q > 0.0))
    throw Error(ErrorKind::OutOfRange, "threshold inputs must be positive");
  LinfThreshold t;
  if (q <= p)
  {
    t.case_tag = BoundCase::I;
    t.k_raw = std::pow(std::pow(2.0, p) * sobolev * lambda, nu / p) * l1_norm;
    t.k = std::max(t.k_raw, 1.0);
  }
  else
  {
    t.case_tag = BoundCase::II;
    t.alpha = p * (1.0 / q - 1.0 / p + 1.0 / nu);
    if (!(t.alpha > 0.0))
      throw Error(ErrorKind::InternalConsistency, "alpha must be positive for subcritical q");
    t.k_raw = std::pow(sobolev * lambda * std::pow(2.0, q), 1.0 / t.alpha) * l1_norm;
    t.k = std::max(t.k_raw, 1.0);
  }
  return t;
}

double level_set_measure(const Field &u, double k)
{
  const auto count = (u.values.array() > k).count();
  return static_cast<double>(count) * u.grid->cell_volume();
}

double level_set_excess(const Field &u, double k)
{
  return (u.values.array() - k).max(0.0).sum() * u.grid->cell_volume();
}

PositivityResult positivity_check(const Field &u, double core_shrink)
{
  if (!(core_shrink > 0.0 && core_shrink < 1.0))
    throw Error(ErrorKind::OutOfRange, "core_shrink must lie in (0, 1)");
  if (u.values.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::UndefinedEigenpair, "positivity check of the zero field");
  const auto &grid = *u.grid;
  PositivityResult r{(u.values.array() > 0.0).all(), std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < grid.num_nodes(); ++i)
  {
    bool inside = true;
    for (int j = 0; j < grid.dim() && inside; ++j)
    {
      const auto &iv = grid.box()[j];
      const double center = 0.5 * (iv.lo + iv.hi);
      const double half = 0.5 * core_shrink * iv.length();
      inside = std::abs(grid.node_coordinate(i, j) - center) <= half;
    }
    if (inside)
      r.c = std::min(r.c, u.values[i]);
  }
  // A grid too coarse to have a node in the core: fall back to all nodes.
  if (!std::isfinite(r.c))
    r.c = u.values.minCoeff();
  return r;
}

RegularityReport regularity_report(const Field &eigenfunction, double lambda, double p, double q,
                                   double sobolev, double core_shrink)
{
  const int nu = eigenfunction.grid->group().homogeneous_dim();
  Field u = eigenfunction;
  u *= 1.0 / lq_norm(u, q);
  if (u.values.sum() < 0.0)
    u *= -1.0;

  RegularityReport rep;
  rep.sup_norm = u.values.cwiseAbs().maxCoeff();
  rep.sobolev_constant = sobolev;
  rep.l1_norm = lq_norm(u, 1.0);
  rep.threshold = linf_threshold(lambda, sobolev, rep.l1_norm, p, q, nu);

  const double r = rep.threshold.case_tag == BoundCase::I ? p : q;
  const double exponent = rep.threshold.case_tag == BoundCase::I
                              ? p / (nu * (p - 1.0))
                              : rep.threshold.alpha / (q - 1.0);
  const double factor = std::pow(lambda * sobolev * std::pow(2.0, r), 1.0 / (r - 1.0));
  for (double k = rep.threshold.k;; k *= 1.25)
  {
    const double measure = level_set_measure(u, k);
    const double lhs = level_set_excess(u, k);
    const double rhs = factor * k * std::pow(measure, 1.0 + exponent);
    const bool holds = lhs <= rhs * (1.0 + 1e-12);
    rep.level_measures.emplace_back(k, measure);
    rep.decay.push_back({k, measure, lhs, rhs, holds});
    rep.decay_holds = rep.decay_holds && holds;
    if (measure == 0.0)
      break;
  }

  const auto pos = positivity_check(u, core_shrink);
  rep.positive = pos.positive;
  rep.min_on_core = pos.c;
  return rep;
}

double embedding_ratio(const Field &u, double p, double l)
{
  return lq_norm(u, l) / std::pow(p_energy(u, p, 0.0), 1.0 / p);
}

double log_log_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::DimensionMismatch, "regression needs two or more matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace subeigen
