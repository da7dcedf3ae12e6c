// SPDX-License-Identifier: Apache-2.0

#include "subeigen/eigensolver.hpp"

#include <cmath>

#include "subeigen/error.hpp"
#include "subeigen/operators.hpp"

namespace subeigen
{

InnerConfig SolverConfig::inner_config() const
{
  InnerConfig inner = default_inner_config(p, eps_floor);
  if (tol_inner > 0.0)
    inner.tol_grad = tol_inner;
  inner.max_iters = max_inner;
  inner.method = inner_method;
  return inner;
}

std::string to_string(EigenMethod method)
{
  return method == EigenMethod::InverseIteration ? "inverse" : "rayleigh";
}

double rayleigh_quotient(const Field &u, double p, double q)
{
  const double norm = lq_norm(u, q);
  if (!(norm > 0.0))
    throw Error(ErrorKind::UndefinedEigenpair, "Rayleigh quotient of the zero field");
  return p_energy(u, p, 0.0) / std::pow(norm, p);
}

Field default_start(const GridPtr &grid, double q)
{
  Field u = Field::constant(grid, 1.0);
  u *= 1.0 / lq_norm(u, q);
  return u;
}

namespace
{

void validate(const SolverConfig &cfg)
{
  if (!cfg.grid)
    throw Error(ErrorKind::InvalidConfig, "solver config has no grid");
  if (!(cfg.p > 1.0) || !(cfg.q > 1.0))
    throw Error(ErrorKind::OutOfRange, "eigensolvers require p > 1 and q > 1");
  if (!(cfg.tol_outer > 0.0) || cfg.max_outer < 1 || cfg.max_rayleigh < 1)
    throw Error(ErrorKind::OutOfRange, "outer tolerance and iteration caps must be positive");
}

// Unit L^q norm, nonnegative node sum.
void normalize(Field &u, double q)
{
  const double norm = lq_norm(u, q);
  if (!(norm > 0.0))
    throw Error(ErrorKind::DegenerateIterate, "iterate vanished");
  u *= (u.values.sum() < 0.0 ? -1.0 : 1.0) / norm;
}

Field prepare_start(const SolverConfig &cfg, std::optional<Field> start)
{
  Field u = start ? std::move(*start) : default_start(cfg.grid, cfg.q);
  require_same_grid(u.grid, cfg.grid);
  if (u.values.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::UndefinedEigenpair, "initial iterate must be nonzero");
  normalize(u, cfg.q);
  return u;
}

}  // namespace

EigenResult inverse_iteration(const SolverConfig &cfg, std::optional<Field> w0)
{
  validate(cfg);
  const double p = cfg.p, q = cfg.q;
  const InnerConfig inner = cfg.inner_config();
  const Eigen::VectorXd basis = basis_energy_norms(*cfg.grid, p);

  EigenResult res;
  res.method = EigenMethod::InverseIteration;
  Field w = prepare_start(cfg, std::move(w0));
  Field warm = Field::zeros(cfg.grid);
  double mu_prev = 0.0;
  for (int n = 0; n < cfg.max_outer; ++n)
  {
    const DualField f = apply_B(w, q);
    InnerStats stats;
    Field z = solve_inner(f, p, inner, &stats, n > 0 ? &warm : nullptr);
    const double z_norm = lq_norm(z, q);
    if (!(z_norm > 0.0))
      throw Error(ErrorKind::DegenerateIterate, "inner solve returned the zero field");
    const double mu = std::pow(z_norm, 1.0 - p);

    Field next = z;
    normalize(next, q);
    // By homogeneity the next solve starts near mu^{-1/(p-1)} w_{n+1}.
    warm = std::pow(mu, -1.0 / (p - 1.0)) * next;

    const double change = lq_norm(next - w, q);
    res.mu_trace.push_back(mu);
    res.unorm_trace.push_back(p_energy(next, p, 0.0));
    res.change_trace.push_back(change);
    res.inner_iters.push_back(stats.iterations);
    res.residual_trace.push_back(residual(next, mu, p, q, basis));
    res.outer_iters = n + 1;
    w = std::move(next);

    if (n > 0 && std::abs(mu_prev - mu) <= cfg.tol_outer * mu && change <= cfg.tol_outer)
    {
      res.converged = true;
      break;
    }
    mu_prev = mu;
  }
  res.lambda_hat = res.mu_trace.back();
  res.residual = res.residual_trace.back();
  res.eigenfunction = std::move(w);
  return res;
}

EigenResult rayleigh_minimize(const SolverConfig &cfg, std::optional<Field> u0)
{
  validate(cfg);
  const double p = cfg.p, q = cfg.q;
  const auto &grid = *cfg.grid;
  const double vol = grid.cell_volume();
  const Eigen::VectorXd basis = basis_energy_norms(grid, p);
  const Eigen::VectorXd inv_diag = laplacian_diagonal(grid).cwiseInverse();

  EigenResult res;
  res.method = EigenMethod::RayleighMinimization;
  Field u = prepare_start(cfg, std::move(u0));

  // On the unit sphere, (1/p) grad R = A(u) - R B(u) in node representation.
  DualField a;
  double quotient = apply_A_with_energy(u, p, 0.0, a);
  Eigen::VectorXd grad = a.values - quotient * apply_B(u, q).values;
  auto certificate = [&](const Eigen::VectorXd &g, double energy) {
    return (g.cwiseAbs().array() / basis.array()).maxCoeff() * vol /
           std::pow(energy, (p - 1.0) / p);
  };
  double cert = certificate(grad, quotient);

  Eigen::VectorXd precond_grad = inv_diag.cwiseProduct(grad);
  Eigen::VectorXd dir = -precond_grad;
  double step = 0.0;
  Field trial{cfg.grid, Eigen::VectorXd()};
  DualField a_trial;
  const double tol = cfg.tol_outer;
  for (int k = 0; k < cfg.max_rayleigh; ++k)
  {
    if (cert <= tol)
    {
      res.converged = true;
      break;
    }
    double slope = grad.dot(dir);
    if (!(slope < 0.0))
    {
      dir = -precond_grad;
      slope = grad.dot(dir);
    }
    if (step == 0.0)
      step = 0.1 * u.values.cwiseAbs().maxCoeff() / dir.cwiseAbs().maxCoeff();
    else
      step *= 2.0;

    bool accepted = false;
    int evals = 0;
    double trial_quotient = 0.0;
    for (; evals < 60; ++evals)
    {
      trial.values = u.values + step * dir;
      const double norm = lq_norm(trial, q);
      trial.values /= norm;
      trial_quotient = apply_A_with_energy(trial, p, 0.0, a_trial);
      if (trial_quotient <= quotient + 1e-4 * step * p * vol * slope)
      {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || !(trial_quotient < quotient))
      break;

    if (trial.values.sum() < 0.0)
    {
      trial.values = -trial.values;
      a_trial.values = -a_trial.values;
      dir = -dir;
    }
    const double change = lq_norm(trial - u, q);
    std::swap(u.values, trial.values);
    std::swap(a, a_trial);
    quotient = trial_quotient;

    const Eigen::VectorXd b = apply_B(u, q).values;
    const Eigen::VectorXd grad_new = a.values - quotient * b;
    const Eigen::VectorXd precond_new = inv_diag.cwiseProduct(grad_new);
    // Polak-Ribiere+ with the previous direction moved to the new tangent space.
    const double beta =
        std::max(0.0, grad_new.dot(precond_new - precond_grad) / grad.dot(precond_grad));
    const Eigen::VectorXd transported = dir - (b.dot(dir) / b.dot(u.values)) * u.values;
    dir = -precond_new + beta * transported;
    grad = grad_new;
    precond_grad = precond_new;
    cert = certificate(grad, quotient);

    res.mu_trace.push_back(quotient);
    res.unorm_trace.push_back(quotient);
    res.change_trace.push_back(change);
    res.inner_iters.push_back(evals + 1);
    res.residual_trace.push_back(cert);
    res.outer_iters = k + 1;
  }
  res.converged = res.converged || cert <= tol;
  res.lambda_hat = rayleigh_quotient(u, p, q);
  res.residual = residual(u, res.lambda_hat, p, q, basis);
  res.eigenfunction = std::move(u);
  return res;
}

}  // namespace subeigen
