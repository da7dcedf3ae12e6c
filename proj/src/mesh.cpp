// SPDX-License-Identifier: Apache-2.0

#include "subeigen/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "subeigen/error.hpp"

namespace subeigen
{

GridPtr Grid::build(const GroupDescriptor &group, std::vector<Interval> box,
                    std::vector<int> resolution)
{
  const int n = group.topological_dim();
  if (static_cast<int>(box.size()) != n || static_cast<int>(resolution.size()) != n)
    throw Error(ErrorKind::DimensionMismatch,
                "box and resolution must have one entry per group coordinate");
  for (int j = 0; j < n; ++j)
  {
    if (!(box[j].hi > box[j].lo) || !std::isfinite(box[j].lo) || !std::isfinite(box[j].hi))
      throw Error(ErrorKind::OutOfRange, "box extents must be finite and positive");
    if (resolution[j] < 1)
      throw Error(ErrorKind::OutOfRange, "resolution must be >= 1 on every axis");
  }

  auto grid = std::shared_ptr<Grid>(new Grid());
  grid->group_ = group;
  grid->box_ = std::move(box);
  grid->resolution_ = std::move(resolution);
  grid->spacing_.resize(n);
  grid->strides_.resize(n);
  grid->num_nodes_ = 1;
  grid->num_cells_ = 1;
  grid->cell_volume_ = 1.0;
  for (int j = 0; j < n; ++j)
  {
    grid->spacing_[j] = grid->box_[j].length() / (grid->resolution_[j] + 1);
    grid->strides_[j] = grid->num_nodes_;
    grid->num_nodes_ *= grid->resolution_[j];
    grid->num_cells_ *= grid->resolution_[j] + 1;
    grid->cell_volume_ *= grid->spacing_[j];
  }

  const int n1 = group.horizontal_dim();
  grid->cell_nodes_.assign(static_cast<std::size_t>(grid->num_cells_ * (n + 1)), -1);
  grid->frame_.assign(static_cast<std::size_t>(grid->num_cells_ * n1 * n), 0.0);
  std::vector<int> corner(n, -1);
  std::vector<double> point(n);
  for (Eigen::Index c = 0; c < grid->num_cells_; ++c)
  {
    auto interior = [&](const std::vector<int> &m) {
      for (int j = 0; j < n; ++j)
        if (m[j] < 0 || m[j] >= grid->resolution_[j])
          return false;
      return true;
    };
    auto *nodes = &grid->cell_nodes_[static_cast<std::size_t>(c * (n + 1))];
    nodes[0] = interior(corner) ? grid->node_index(corner) : -1;
    for (int j = 0; j < n; ++j)
    {
      auto next = corner;
      ++next[j];
      nodes[j + 1] = interior(next) ? grid->node_index(next) : -1;
      point[j] = grid->box_[j].lo + (corner[j] + 1) * grid->spacing_[j];
    }
    auto *frame = &grid->frame_[static_cast<std::size_t>(c * n1 * n)];
    for (int k = 0; k < n1; ++k)
      for (int j = 0; j < n; ++j)
        frame[k * n + j] = group.frame_coefficient(k, j, point);

    for (int j = 0; j < n; ++j)
    {
      if (++corner[j] < grid->resolution_[j])
        break;
      corner[j] = -1;
    }
  }
  return grid;
}

double Grid::domain_volume() const
{
  double v = 1.0;
  for (const auto &iv : box_)
    v *= iv.length();
  return v;
}

std::vector<int> Grid::node_multi_index(Eigen::Index node) const
{
  std::vector<int> m(resolution_.size());
  for (std::size_t j = 0; j < m.size(); ++j)
  {
    m[j] = static_cast<int>(node % resolution_[j]);
    node /= resolution_[j];
  }
  return m;
}

Eigen::Index Grid::node_index(std::span<const int> multi) const
{
  Eigen::Index idx = 0;
  for (std::size_t j = 0; j < multi.size(); ++j)
    idx += multi[j] * strides_[j];
  return idx;
}

std::vector<double> Grid::node_coordinates(Eigen::Index node) const
{
  const auto m = node_multi_index(node);
  std::vector<double> x(m.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    x[j] = box_[j].lo + (m[j] + 1) * spacing_[j];
  return x;
}

double Grid::node_coordinate(Eigen::Index node, int axis) const
{
  const auto i = (node / strides_[axis]) % resolution_[axis];
  return box_[axis].lo + static_cast<double>(i + 1) * spacing_[axis];
}

void Grid::cell_gradient(Eigen::Index cell, const Eigen::VectorXd &values,
                         std::span<double> out) const
{
  const int n = dim();
  const int n1 = horizontal_dim();
  const auto *nodes = &cell_nodes_[static_cast<std::size_t>(cell * (n + 1))];
  const auto *frame = &frame_[static_cast<std::size_t>(cell * n1 * n)];
  const double base = nodes[0] >= 0 ? values[nodes[0]] : 0.0;
  double diff[8];
  for (int j = 0; j < n; ++j)
    diff[j] = ((nodes[j + 1] >= 0 ? values[nodes[j + 1]] : 0.0) - base) / spacing_[j];
  for (int k = 0; k < n1; ++k)
  {
    double g = 0.0;
    for (int j = 0; j < n; ++j)
      g += frame[k * n + j] * diff[j];
    out[k] = g;
  }
}

void Grid::scatter_cell_adjoint(Eigen::Index cell, std::span<const double> flux,
                                Eigen::VectorXd &accum) const
{
  const int n = dim();
  const int n1 = horizontal_dim();
  const auto *nodes = &cell_nodes_[static_cast<std::size_t>(cell * (n + 1))];
  const auto *frame = &frame_[static_cast<std::size_t>(cell * n1 * n)];
  for (int j = 0; j < n; ++j)
  {
    double s = 0.0;
    for (int k = 0; k < n1; ++k)
      s += frame[k * n + j] * flux[k];
    s /= spacing_[j];
    if (nodes[j + 1] >= 0)
      accum[nodes[j + 1]] += s;
    if (nodes[0] >= 0)
      accum[nodes[0]] -= s;
  }
}

void Grid::cell_stencil(Eigen::Index cell, std::span<Eigen::Index> nodes,
                        std::span<double> basis_gradients) const
{
  const int n = dim();
  const int n1 = horizontal_dim();
  const auto *local = &cell_nodes_[static_cast<std::size_t>(cell * (n + 1))];
  const auto *frame = &frame_[static_cast<std::size_t>(cell * n1 * n)];
  for (int m = 0; m <= n; ++m)
    nodes[m] = local[m];
  for (int k = 0; k < n1; ++k)
  {
    double corner = 0.0;
    for (int j = 0; j < n; ++j)
    {
      const double a = frame[k * n + j] / spacing_[j];
      basis_gradients[(j + 1) * n1 + k] = a;
      corner -= a;
    }
    basis_gradients[k] = corner;
  }
}

std::vector<Eigen::Index> Grid::cells_touching(Eigen::Index node) const
{
  const auto m = node_multi_index(node);
  auto cell_of = [&](const std::vector<int> &corner) {
    Eigen::Index idx = 0, stride = 1;
    for (std::size_t j = 0; j < corner.size(); ++j)
    {
      idx += (corner[j] + 1) * stride;
      stride *= resolution_[j] + 1;
    }
    return idx;
  };
  std::vector<Eigen::Index> cells{cell_of(m)};
  for (std::size_t j = 0; j < m.size(); ++j)
  {
    auto prev = m;
    --prev[j];
    cells.push_back(cell_of(prev));
  }
  return cells;
}

bool Grid::operator==(const Grid &other) const
{
  if (!(group_ == other.group_) || resolution_ != other.resolution_)
    return false;
  for (std::size_t j = 0; j < box_.size(); ++j)
    if (box_[j].lo != other.box_[j].lo || box_[j].hi != other.box_[j].hi)
      return false;
  return true;
}

void require_same_grid(const GridPtr &a, const GridPtr &b)
{
  if (!a || !b)
    throw Error(ErrorKind::GridMismatch, "field has no grid");
  if (a != b && !(*a == *b))
    throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

Field Field::zeros(GridPtr grid)
{
  const auto n = grid->num_nodes();
  return {std::move(grid), Eigen::VectorXd::Zero(n)};
}

Field Field::constant(GridPtr grid, double value)
{
  const auto n = grid->num_nodes();
  return {std::move(grid), Eigen::VectorXd::Constant(n, value)};
}

Field Field::sample(GridPtr grid, const std::function<double(std::span<const double>)> &f)
{
  Field u = zeros(grid);
  for (Eigen::Index i = 0; i < grid->num_nodes(); ++i)
  {
    const auto x = grid->node_coordinates(i);
    u.values[i] = f(x);
  }
  return u;
}

Field &Field::operator+=(const Field &other)
{
  require_same_grid(grid, other.grid);
  values += other.values;
  return *this;
}

Field &Field::operator-=(const Field &other)
{
  require_same_grid(grid, other.grid);
  values -= other.values;
  return *this;
}

Field &Field::operator*=(double t)
{
  values *= t;
  return *this;
}

Field operator+(Field a, const Field &b) { return a += b; }
Field operator-(Field a, const Field &b) { return a -= b; }
Field operator*(double t, Field a) { return a *= t; }
Field operator-(Field a) { return a *= -1.0; }

HField horizontal_gradient(const Field &u)
{
  const auto &grid = *u.grid;
  HField g{u.grid, Eigen::MatrixXd(grid.num_cells(), grid.horizontal_dim())};
  double buf[8];
  for (Eigen::Index c = 0; c < grid.num_cells(); ++c)
  {
    grid.cell_gradient(c, u.values, std::span<double>(buf, grid.horizontal_dim()));
    for (int k = 0; k < grid.horizontal_dim(); ++k)
      g.values(c, k) = buf[k];
  }
  return g;
}

double p_energy(const Field &u, double p, double eps)
{
  if (!(p > 1.0))
    throw Error(ErrorKind::OutOfRange, "p-energy requires p > 1");
  const auto &grid = *u.grid;
  const int n1 = grid.horizontal_dim();
  const double eps2 = eps * eps;
  double buf[8];
  double sum = 0.0;
  for (Eigen::Index c = 0; c < grid.num_cells(); ++c)
  {
    grid.cell_gradient(c, u.values, std::span<double>(buf, n1));
    double g2 = eps2;
    for (int k = 0; k < n1; ++k)
      g2 += buf[k] * buf[k];
    if (g2 > 0.0)
      sum += p == 2.0 ? g2 : std::pow(g2, 0.5 * p);
  }
  return sum * grid.cell_volume();
}

double lq_norm(const Field &u, double q)
{
  if (!(q >= 1.0))
    throw Error(ErrorKind::OutOfRange, "L^q norm requires q >= 1");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
  {
    const double a = std::abs(u.values[i]);
    if (a > 0.0)
      sum += q == 2.0 ? a * a : std::pow(a, q);
  }
  return std::pow(sum * u.grid->cell_volume(), 1.0 / q);
}

void write_field_csv(std::ostream &os, const Field &u)
{
  static const char *axis_names[] = {"x", "y", "t", "x3", "x4", "x5", "x6", "x7"};
  const auto &grid = *u.grid;
  for (int j = 0; j < grid.dim(); ++j)
    os << axis_names[j] << ',';
  os << "value\n";
  char buf[32];
  for (Eigen::Index i = 0; i < grid.num_nodes(); ++i)
  {
    for (int j = 0; j < grid.dim(); ++j)
    {
      std::snprintf(buf, sizeof buf, "%.17g", grid.node_coordinate(i, j));
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", u.values[i]);
    os << buf << '\n';
  }
}

}  // namespace subeigen
