// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "subeigen/error.hpp"
#include "subeigen/mesh.hpp"

using namespace subeigen;
using std::numbers::pi;

namespace
{

GridPtr unit_square(int n)
{
  return Grid::build(GroupDescriptor::euclidean2(), {{0, 1}, {0, 1}}, {n, n});
}

double sine_bump(std::span<const double> x)
{
  return std::sin(pi * x[0]) * std::sin(pi * x[1]);
}

// Largest deviation of X_k f = t from its analytic value at cell centers,
// over cells whose corner and neighbours are all interior nodes.
double heisenberg_t_gradient_error(int n)
{
  auto grid = Grid::build(GroupDescriptor::heisenberg1(), {{-1, 1}, {-1, 1}, {-1, 1}}, {n, n, n});
  const Field u = Field::sample(grid, [](std::span<const double> x) { return x[2]; });
  const HField g = horizontal_gradient(u);
  const double h = grid->spacing()[0];
  double worst = 0.0;
  Eigen::Index c = 0;
  for (int k = -1; k < n; ++k)
    for (int j = -1; j < n; ++j)
      for (int i = -1; i < n; ++i, ++c)
      {
        if (i < 0 || j < 0 || k < 0 || i + 1 >= n || j + 1 >= n || k + 1 >= n)
          continue;
        const double x = -1 + (i + 1.5) * h, y = -1 + (j + 1.5) * h;
        worst = std::max({worst, std::abs(g.values(c, 0) + y / 2), std::abs(g.values(c, 1) - x / 2)});
      }
  return worst;
}

}  // namespace

TEST_SUITE("mesh")
{
  TEST_CASE("grid construction")
  {
    auto g = unit_square(3);
    CHECK(g->num_nodes() == 9);
    CHECK(g->spacing()[0] == 0.25);
    CHECK(g->spacing()[1] == 0.25);
    CHECK(g->num_cells() == 16);
    CHECK(g->cell_volume() * g->num_cells() == doctest::Approx(g->domain_volume()));

    auto h = Grid::build(GroupDescriptor::heisenberg1(), {{0, 1}, {0, 1}, {0, 1}}, {3, 3, 3});
    CHECK(h->num_nodes() == 27);

    CHECK_THROWS_AS(Grid::build(GroupDescriptor::euclidean2(), {{0, 1}, {0, 1}}, {0, 3}), Error);
    CHECK_THROWS_AS(Grid::build(GroupDescriptor::euclidean2(), {{0, 1}, {1, 1}}, {3, 3}), Error);
    CHECK_THROWS_AS(Grid::build(GroupDescriptor::heisenberg1(), {{0, 1}, {0, 1}}, {3, 3}), Error);
  }

  TEST_CASE("node indexing")
  {
    auto g = Grid::build(GroupDescriptor::heisenberg1(), {{0, 1}, {-2, 2}, {0, 3}}, {3, 4, 5});
    for (Eigen::Index i = 0; i < g->num_nodes(); ++i)
    {
      const auto m = g->node_multi_index(i);
      CHECK(g->node_index(m) == i);
      const auto x = g->node_coordinates(i);
      for (int j = 0; j < 3; ++j)
      {
        CHECK(x[j] > g->box()[j].lo);
        CHECK(x[j] < g->box()[j].hi);
        CHECK(g->node_coordinate(i, j) == x[j]);
      }
      CHECK(g->cells_touching(i).size() == 4);
    }
  }

  TEST_CASE("gradient of linear and zero fields")
  {
    auto g = unit_square(16);
    const HField zero = horizontal_gradient(Field::zeros(g));
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

    const Field u = Field::sample(g, [](std::span<const double> x) { return x[0]; });
    const HField grad = horizontal_gradient(u);
    // Cells away from the boundary see the exact slope.
    Eigen::Index c = 0;
    for (int j = -1; j < 16; ++j)
      for (int i = -1; i < 16; ++i, ++c)
        if (i >= 0 && j >= 0 && i + 1 < 16 && j + 1 < 16)
        {
          CHECK(grad.values(c, 0) == doctest::Approx(1.0).epsilon(1e-12));
          CHECK(std::abs(grad.values(c, 1)) < 1e-12);
        }
  }

  TEST_CASE("heisenberg gradient of t converges at first order")
  {
    const double e8 = heisenberg_t_gradient_error(8);
    const double e16 = heisenberg_t_gradient_error(16);
    const double e32 = heisenberg_t_gradient_error(32);
    CHECK(e32 < 0.05);
    CHECK(e8 / e16 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(e16 / e32 == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("energy and norms")
  {
    auto g = unit_square(64);
    CHECK(p_energy(Field::zeros(g), 2.0) == 0.0);
    CHECK(p_energy(Field::zeros(g), 3.0) == 0.0);
    CHECK(lq_norm(Field::zeros(g), 2.0) == 0.0);

    const Field u = Field::sample(g, sine_bump);
    CHECK(p_energy(u, 2.0) == doctest::Approx(pi * pi / 2).epsilon(0.01));
    CHECK(lq_norm(u, 2.0) == doctest::Approx(0.5).epsilon(0.01));

    for (const double p : {1.5, 2.0, 3.0, 4.0})
      for (const double t : {-2.5, 0.3, 7.0})
      {
        CHECK(p_energy(t * u, p) == doctest::Approx(std::pow(std::abs(t), p) * p_energy(u, p)).epsilon(1e-13));
        CHECK(lq_norm(t * u, p) == doctest::Approx(std::abs(t) * lq_norm(u, p)).epsilon(1e-13));
      }
    CHECK_THROWS_AS(p_energy(u, 1.0), Error);

    for (const double p : {1.5, 3.0})
    {
      double prev = p_energy(u, p, 1.0);
      for (const double eps : {0.3, 0.1, 1e-2, 1e-4, 0.0})
      {
        const double e = p_energy(u, p, eps);
        CHECK(e <= prev);
        prev = e;
      }
      CHECK(p_energy(u, p, 1e-7) == doctest::Approx(p_energy(u, p)).epsilon(1e-8));
    }
  }

  TEST_CASE("field arithmetic checks grids")
  {
    Field a = Field::constant(unit_square(4), 1.0);
    const Field b = Field::constant(unit_square(4), 2.0);
    CHECK((a + b).values.sum() == doctest::Approx(48.0));
    const Field c = Field::constant(unit_square(5), 1.0);
    CHECK_THROWS_AS(a += c, Error);
  }

  TEST_CASE("field csv")
  {
    auto g = Grid::build(GroupDescriptor::heisenberg1(), {{0, 1}, {0, 1}, {0, 1}}, {2, 1, 1});
    std::ostringstream os;
    write_field_csv(os, Field::constant(g, 0.5));
    CHECK(os.str() ==
          "x,y,t,value\n"
          "0.33333333333333331,0.5,0.5,0.5\n"
          "0.66666666666666663,0.5,0.5,0.5\n");
  }
}
