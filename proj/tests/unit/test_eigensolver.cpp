// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "subeigen/eigensolver.hpp"
#include "subeigen/error.hpp"
#include "subeigen/operators.hpp"
#include "subeigen/oracle.hpp"
#include "support.hpp"

using namespace subeigen;
using namespace subeigen::testing;
using std::numbers::pi;

namespace
{

SolverConfig config(GridPtr grid, double p, double q)
{
  SolverConfig cfg;
  cfg.grid = std::move(grid);
  cfg.p = p;
  cfg.q = q;
  return cfg;
}

void check_traces(const EigenResult &r, const SolverConfig &cfg)
{
  const double slack = 10 * cfg.effective_tol_inner();
  for (std::size_t n = 1; n < r.mu_trace.size(); ++n)
    CHECK(r.mu_trace[n] <= r.mu_trace[n - 1] + slack * r.mu_trace[n - 1]);
  if (r.method == EigenMethod::InverseIteration)
    for (std::size_t n = 0; n < r.mu_trace.size(); ++n)
      CHECK(r.unorm_trace[n] <= r.mu_trace[n] * (1 + slack));
  CHECK(lq_norm(r.eigenfunction, cfg.q) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.eigenfunction.values.sum() >= 0.0);
}

}  // namespace

TEST_SUITE("eigensolver")
{
  TEST_CASE("Rayleigh quotient")
  {
    const auto grid = square(64);
    const Field u = Field::sample(grid, [](std::span<const double> x) {
      return std::sin(pi * x[0]) * std::sin(pi * x[1]);
    });
    CHECK(rayleigh_quotient(u, 2.0, 2.0) == doctest::Approx(2 * pi * pi).epsilon(0.01));
    for (const double t : {-4.0, 0.01, 3.0})
      CHECK(rayleigh_quotient(t * u, 3.0, 2.0) == doctest::Approx(rayleigh_quotient(u, 3.0, 2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(rayleigh_quotient(Field::zeros(grid), 2.0, 2.0), Error);
  }

  TEST_CASE("three-node strip at p = q = 2")
  {
    auto grid = Grid::build(GroupDescriptor::euclidean2(), {{0, 4}, {0, 2e5}}, {3, 1});
    SolverConfig cfg = config(grid, 2.0, 2.0);
    cfg.tol_outer = 1e-10;
    const double expected = 2 - std::sqrt(2.0);
    CHECK(inverse_iteration(cfg).lambda_hat == doctest::Approx(expected).epsilon(1e-8));
    CHECK(rayleigh_minimize(cfg).lambda_hat == doctest::Approx(expected).epsilon(1e-8));
  }

  TEST_CASE("unit square at p = q = 2")
  {
    const SolverConfig cfg = config(square(32), 2.0, 2.0);
    const EigenResult inv = inverse_iteration(cfg);
    const EigenResult ray = rayleigh_minimize(cfg);
    CHECK(inv.converged);
    CHECK(ray.converged);
    CHECK(inv.lambda_hat == doctest::Approx(2 * pi * pi).epsilon(0.01));
    CHECK(ray.lambda_hat == doctest::Approx(inv.lambda_hat).epsilon(0.01));
    CHECK(inv.residual < 1e-5);
    check_traces(inv, cfg);
    check_traces(ray, cfg);
    CHECK(inv.mu_trace.size() == static_cast<std::size_t>(inv.outer_iters));
  }

  TEST_CASE("nonlinear cases keep their invariants")
  {
    for (const auto &[p, q] : {std::pair{1.5, 2.0}, {3.0, 2.0}, {2.0, 3.0}, {1.5, 1.5}})
    {
      const SolverConfig cfg = config(square(12), p, q);
      const EigenResult inv = inverse_iteration(cfg);
      CHECK(inv.converged);
      check_traces(inv, cfg);
      const EigenResult ray = rayleigh_minimize(cfg);
      CHECK(ray.converged);
      check_traces(ray, cfg);
      CHECK(ray.lambda_hat == doctest::Approx(inv.lambda_hat).epsilon(1e-4));
      CHECK(inv.eigenfunction.values.minCoeff() > 0.0);
      CHECK(inv.residual <= 1e-4);
      CHECK(ray.residual <= 1e-4);
      // Scalar multiples of the minimizer are minimizers.
      for (const double t : {-2.0, 0.5, 7.0})
      {
        CHECK(rayleigh_quotient(t * ray.eigenfunction, p, q) ==
              doctest::Approx(ray.lambda_hat).epsilon(1e-13));
        CHECK(residual(t * ray.eigenfunction, ray.lambda_hat, p, q) ==
              doctest::Approx(residual(ray.eigenfunction, ray.lambda_hat, p, q)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("3x3 grid at p = 2.5, q = 2 matches the oracle")
  {
    const auto grid = square(3);
    const SolverConfig cfg = config(grid, 2.5, 2.0);
    const auto ref = oracle::brute_force_lambda(grid, 2.5, 2.0);
    CHECK(ref.minimizer.values.minCoeff() > 0.0);
    CHECK(inverse_iteration(cfg).lambda_hat >= ref.lambda_star - 1e-6);
    CHECK(inverse_iteration(cfg).lambda_hat == doctest::Approx(ref.lambda_star).epsilon(1e-4));
    CHECK(rayleigh_minimize(cfg).lambda_hat == doctest::Approx(ref.lambda_star).epsilon(1e-4));
  }

  TEST_CASE("heisenberg cube, both methods agree")
  {
    const SolverConfig cfg = config(cube(16), 2.0, 2.0);
    const EigenResult inv = inverse_iteration(cfg);
    const EigenResult ray = rayleigh_minimize(cfg);
    CHECK(inv.converged);
    CHECK(ray.lambda_hat == doctest::Approx(inv.lambda_hat).epsilon(0.02));
    check_traces(inv, cfg);
  }

  TEST_CASE("start handling")
  {
    const auto grid = square(6);
    SolverConfig cfg = config(grid, 2.0, 2.0);
    CHECK_THROWS_AS(inverse_iteration(cfg, Field::zeros(grid)), Error);
    CHECK_THROWS_AS(inverse_iteration(cfg, Field::zeros(square(5))), Error);

    // A sign-flipped start is flipped back.
    const EigenResult r = inverse_iteration(cfg, -1.0 * default_start(grid, 2.0));
    CHECK(r.eigenfunction.values.minCoeff() > 0.0);

    const Field start = default_start(grid, 3.0);
    CHECK(lq_norm(start, 3.0) == doctest::Approx(1.0));

    cfg.grid = nullptr;
    CHECK_THROWS_AS(inverse_iteration(cfg), Error);
  }

  TEST_CASE("outer iteration cap")
  {
    SolverConfig cfg = config(square(16), 2.0, 2.0);
    cfg.max_outer = 2;
    const EigenResult r = inverse_iteration(cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.outer_iters == 2);
    CHECK(r.lambda_hat == r.mu_trace.back());
  }
}
