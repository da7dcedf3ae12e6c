// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "subeigen/mesh.hpp"

namespace subeigen::testing
{

inline GridPtr square(int n, double lo = 0.0, double hi = 1.0)
{
  return Grid::build(GroupDescriptor::euclidean2(), {{lo, hi}, {lo, hi}}, {n, n});
}

inline GridPtr cube(int n, double lo = 0.0, double hi = 1.0)
{
  return Grid::build(GroupDescriptor::heisenberg1(), {{lo, hi}, {lo, hi}, {lo, hi}}, {n, n, n});
}

inline Field random_field(const GridPtr &grid, std::mt19937_64 &rng, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, scale);
  Field u = Field::zeros(grid);
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    u.values[i] = normal(rng);
  return u;
}

}  // namespace subeigen::testing
