// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "subeigen/error.hpp"
#include "subeigen/mesh.hpp"
#include "subeigen/operators.hpp"

namespace subeigen
{

enum class InnerMethod
{
  CgP2,       // conjugate gradients when p == 2, descent otherwise
  DescentBB,  // preconditioned Barzilai-Borwein descent with Armijo backtracking
};

struct InnerConfig
{
  double tol_grad = 1e-6;
  int max_iters = 100000;
  // Regularization levels, as multiples of the RMS horizontal gradient of the
  // initial guess. Nonincreasing; each stage warm-starts the next and only the
  // last one is used when an initial guess is supplied.
  std::vector<double> eps_schedule{0.0};
  InnerMethod method = InnerMethod::CgP2;
  // Record J after each accepted step (for tests and diagnostics).
  bool record_energy = false;
};

/// Defaults per exponent: tol 1e-8 at p = 2, 1e-6 otherwise; continuation
/// down to 0 for p >= 2 and to `eps_floor` for p < 2.
InnerConfig default_inner_config(double p, double eps_floor = 1e-6);

struct InnerStats
{
  int iterations = 0;
  double relative_gradient = 0.0;
  double eps = 0.0;  // absolute regularization of the final stage
  std::vector<double> energy_trace;
};

class IterationLimitError : public Error
{
public:
  IterationLimitError(Field last, double relative_gradient)
    : Error(ErrorKind::IterationLimit, "inner solve did not reach the gradient tolerance"),
      last_iterate(std::move(last)), gradient_norm(relative_gradient)
  {
  }

  Field last_iterate;
  double gradient_norm;
};

/// Minimizer of J(z) = (1/p) p_energy(z, p, eps) - <f, z>, i.e. the solution
/// of A z = f. Convergence means ||A_eps z - f|| <= tol_grad ||f||.
Field solve_inner(const DualField &f, double p, const InnerConfig &cfg,
                  InnerStats *stats = nullptr, const Field *initial = nullptr);

/// Jacobi-preconditioned CG for the p = 2 problem.
Field solve_linear_cg(const DualField &f, const InnerConfig &cfg, InnerStats *stats = nullptr,
                      const Field *initial = nullptr);

}  // namespace subeigen
