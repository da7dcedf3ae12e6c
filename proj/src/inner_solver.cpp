// SPDX-License-Identifier: Apache-2.0

#include "subeigen/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subeigen
{

InnerConfig default_inner_config(double p, double eps_floor)
{
  InnerConfig cfg;
  if (p == 2.0)
  {
    cfg.tol_grad = 1e-8;
    cfg.eps_schedule = {0.0};
  }
  else if (p > 2.0)
  {
    cfg.tol_grad = 1e-6;
    cfg.eps_schedule = {1e-1, 1e-3, 0.0};
  }
  else
  {
    cfg.tol_grad = 1e-6;
    cfg.eps_schedule = {1e-1, 1e-3, eps_floor};
  }
  return cfg;
}

namespace
{

void validate(const InnerConfig &cfg)
{
  if (!(cfg.tol_grad > 0.0))
    throw Error(ErrorKind::OutOfRange, "inner tolerance must be positive");
  if (cfg.max_iters < 1)
    throw Error(ErrorKind::OutOfRange, "inner iteration cap must be positive");
  if (cfg.eps_schedule.empty())
    throw Error(ErrorKind::OutOfRange, "eps schedule must not be empty");
  for (std::size_t i = 0; i < cfg.eps_schedule.size(); ++i)
  {
    if (!(cfg.eps_schedule[i] >= 0.0))
      throw Error(ErrorKind::OutOfRange, "eps schedule entries must be nonnegative");
    if (i > 0 && cfg.eps_schedule[i] > cfg.eps_schedule[i - 1])
      throw Error(ErrorKind::OutOfRange, "eps schedule must be nonincreasing");
  }
}

// Jacobi preconditioner from the Hessian diagonal at z, floored so that flat
// regions (p > 2) do not produce unbounded steps.
Eigen::VectorXd inverse_hessian_diagonal(const Field &z, double p, double eps)
{
  Eigen::VectorXd d = hessian_diagonal(z, p, eps);
  const double floor = 1e-6 * d.maxCoeff();
  if (!(floor > 0.0))
    return laplacian_diagonal(*z.grid).cwiseInverse();
  return d.cwiseMax(floor).cwiseInverse();
}

// Preconditioned descent on J(z) = E_eps(z)/p - <f, z> with BB step lengths
// and Armijo backtracking. Returns the number of accepted steps.
int bb_descent(Field &z, const DualField &f, double p, double eps, double tol, int budget,
               InnerStats *stats, bool record)
{
  const auto &grid = *z.grid;
  const double vol = grid.cell_volume();
  Eigen::VectorXd inv_diag = inverse_hessian_diagonal(z, p, eps);
  const double f_norm = f.values.norm();

  DualField a;
  double energy = apply_A_with_energy(z, p, eps, a);
  Eigen::VectorXd grad = a.values - f.values;
  double obj = energy / p - pairing(f, z);
  if (record && stats)
    stats->energy_trace.push_back(obj);

  Eigen::VectorXd z_prev, grad_prev;
  double step = 0.0;
  int iters = 0;
  Field trial{z.grid, Eigen::VectorXd()};
  DualField a_trial;
  for (;;)
  {
    const double rel = grad.norm() / f_norm;
    if (stats)
      stats->relative_gradient = rel;
    if (rel <= tol)
      return iters;
    if (iters >= budget)
      throw IterationLimitError(z, rel);

    if (iters > 0)
      inv_diag = inverse_hessian_diagonal(z, p, eps);
    const Eigen::VectorXd dir = -inv_diag.cwiseProduct(grad);
    const double slope = grad.dot(dir);
    if (iters == 0)
    {
      // Curvature along dir by a forward difference of A.
      const double zmax = z.values.cwiseAbs().maxCoeff();
      const double tau = 1e-7 * (zmax > 0.0 ? zmax : 1.0) / dir.cwiseAbs().maxCoeff();
      trial.values = z.values + tau * dir;
      const DualField a_tau = apply_A(trial, p, eps);
      const double curv = dir.dot(a_tau.values - a.values) / tau;
      step = curv > 0.0 ? -slope / curv : 1.0;
    }
    else
    {
      const Eigen::VectorXd s = z.values - z_prev;
      const Eigen::VectorXd y = grad - grad_prev;
      const double sy = s.dot(y);
      const double sms = s.dot(s.cwiseQuotient(inv_diag));
      step = sy > 0.0 ? sms / sy : 2.0 * step;
      step = std::min(step, 1e3);
    }

    const double noise = 1e-13 * (std::abs(energy / p) + std::abs(pairing(f, z)));
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt)
    {
      trial.values = z.values + step * dir;
      const double e_trial = apply_A_with_energy(trial, p, eps, a_trial);
      const double obj_trial = e_trial / p - pairing(f, trial);
      if (obj_trial <= obj + 1e-4 * step * vol * slope + noise)
      {
        z_prev = z.values;
        grad_prev = grad;
        std::swap(z.values, trial.values);
        std::swap(a, a_trial);
        energy = e_trial;
        obj = obj_trial;
        grad = a.values - f.values;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw IterationLimitError(z, grad.norm() / f_norm);
    ++iters;
    if (record && stats)
      stats->energy_trace.push_back(obj);
  }
}

}  // namespace

Field solve_linear_cg(const DualField &f, const InnerConfig &cfg, InnerStats *stats,
                      const Field *initial)
{
  validate(cfg);
  Field z = initial ? *initial : Field::zeros(f.grid);
  require_same_grid(z.grid, f.grid);
  if (stats)
    *stats = InnerStats{};
  const double f_norm = f.values.norm();
  if (f_norm == 0.0)
    return Field::zeros(f.grid);

  const Eigen::VectorXd inv_diag = laplacian_diagonal(*f.grid).cwiseInverse();
  Eigen::VectorXd r = f.values - apply_A(z, 2.0).values;
  Eigen::VectorXd s = inv_diag.cwiseProduct(r);
  Eigen::VectorXd d = s;
  double rs = r.dot(s);
  Field dir{f.grid, Eigen::VectorXd()};
  int iters = 0;
  for (;;)
  {
    const double rel = r.norm() / f_norm;
    if (stats)
    {
      stats->iterations = iters;
      stats->relative_gradient = rel;
    }
    if (rel <= cfg.tol_grad)
      return z;
    if (iters >= cfg.max_iters)
      throw IterationLimitError(z, rel);
    dir.values = d;
    const Eigen::VectorXd kd = apply_A(dir, 2.0).values;
    const double alpha = rs / d.dot(kd);
    z.values += alpha * d;
    r -= alpha * kd;
    s = inv_diag.cwiseProduct(r);
    const double rs_new = r.dot(s);
    d = s + (rs_new / rs) * d;
    rs = rs_new;
    ++iters;
    if (cfg.record_energy && stats)
      stats->energy_trace.push_back(0.5 * p_energy(z, 2.0) - pairing(f, z));
  }
}

Field solve_inner(const DualField &f, double p, const InnerConfig &cfg, InnerStats *stats,
                  const Field *initial)
{
  if (!(p > 1.0))
    throw Error(ErrorKind::OutOfRange, "inner solve requires p > 1");
  validate(cfg);
  if (stats)
    *stats = InnerStats{};
  if (f.values.norm() == 0.0)
    return Field::zeros(f.grid);
  if (p == 2.0 && cfg.method == InnerMethod::CgP2)
    return solve_linear_cg(f, cfg, stats, initial);

  Field z = Field::zeros(f.grid);
  bool warm = false;
  if (initial && initial->values.cwiseAbs().maxCoeff() > 0.0)
  {
    require_same_grid(initial->grid, f.grid);
    z = *initial;
    warm = true;
  }
  else if (p != 2.0)
  {
    // Rescaled p = 2 solution: c^{p-1} <A_p z2, z2> = <f, z2>.
    InnerConfig rough;
    rough.tol_grad = 1e-2;
    rough.max_iters = cfg.max_iters;
    z = solve_linear_cg(f, rough);
    const double fz = pairing(f, z);
    const double ez = p_energy(z, p);
    z *= std::pow(fz / ez, 1.0 / (p - 1.0));
  }

  const double scale = std::sqrt(p_energy(z, 2.0) / f.grid->domain_volume());
  const std::size_t first = warm ? cfg.eps_schedule.size() - 1 : 0;
  int used = 0;
  for (std::size_t stage = first; stage < cfg.eps_schedule.size(); ++stage)
  {
    const bool last = stage + 1 == cfg.eps_schedule.size();
    const double eps = cfg.eps_schedule[stage] * scale;
    const double tol = last ? cfg.tol_grad : std::max(cfg.tol_grad, 1e-4);
    if (stats)
      stats->eps = eps;
    used += bb_descent(z, f, p, eps, tol, cfg.max_iters - used, stats, cfg.record_energy);
    if (stats)
      stats->iterations = used;
  }
  return z;
}

}  // namespace subeigen
