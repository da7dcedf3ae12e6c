// SPDX-License-Identifier: Apache-2.0

#include "subeigen/operators.hpp"

#include <cmath>

#include "subeigen/error.hpp"

namespace subeigen
{

DualField DualField::zeros(GridPtr grid)
{
  const auto n = grid->num_nodes();
  return {std::move(grid), Eigen::VectorXd::Zero(n)};
}

DualField &DualField::operator+=(const DualField &other)
{
  require_same_grid(grid, other.grid);
  values += other.values;
  return *this;
}

DualField &DualField::operator-=(const DualField &other)
{
  require_same_grid(grid, other.grid);
  values -= other.values;
  return *this;
}

DualField &DualField::operator*=(double t)
{
  values *= t;
  return *this;
}

DualField operator+(DualField a, const DualField &b) { return a += b; }
DualField operator-(DualField a, const DualField &b) { return a -= b; }
DualField operator*(double t, DualField a) { return a *= t; }

namespace
{

// (g2)^{(p-2)/2} with the convention 0 at g2 = 0 (the flux vanishes there for p > 1).
double flux_weight(double g2, double p)
{
  if (p == 2.0)
    return 1.0;
  if (g2 <= 0.0)
    return 0.0;
  return std::pow(g2, 0.5 * (p - 2.0));
}

}  // namespace

DualField apply_A(const Field &u, double p, double eps)
{
  DualField d;
  apply_A_with_energy(u, p, eps, d);
  return d;
}

double apply_A_with_energy(const Field &u, double p, double eps, DualField &out)
{
  if (!(p > 1.0))
    throw Error(ErrorKind::OutOfRange, "operator A requires p > 1");
  const auto &grid = *u.grid;
  const int n1 = grid.horizontal_dim();
  const double eps2 = eps * eps;
  out.grid = u.grid;
  out.values.setZero(grid.num_nodes());
  double energy = 0.0;
  double g[8];
  for (Eigen::Index c = 0; c < grid.num_cells(); ++c)
  {
    grid.cell_gradient(c, u.values, std::span<double>(g, n1));
    double g2 = eps2;
    for (int k = 0; k < n1; ++k)
      g2 += g[k] * g[k];
    const double rho = flux_weight(g2, p);
    energy += rho * g2;
    for (int k = 0; k < n1; ++k)
      g[k] *= rho;
    grid.scatter_cell_adjoint(c, std::span<const double>(g, n1), out.values);
  }
  return energy * grid.cell_volume();
}

Eigen::VectorXd hessian_diagonal(const Field &u, double p, double eps)
{
  const auto &grid = *u.grid;
  const int n = grid.dim();
  const int n1 = grid.horizontal_dim();
  const double eps2 = eps * eps;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(grid.num_nodes());
  double g[8];
  Eigen::Index nodes[9];
  double basis[9 * 8];
  for (Eigen::Index c = 0; c < grid.num_cells(); ++c)
  {
    grid.cell_gradient(c, u.values, std::span<double>(g, n1));
    double g2 = eps2;
    for (int k = 0; k < n1; ++k)
      g2 += g[k] * g[k];
    const double rho = flux_weight(g2, p);
    // Cell Hessian: rho I + (p - 2) rho / g2 g g^T.
    const double rank_one = g2 > 0.0 ? (p - 2.0) * rho / g2 : 0.0;
    grid.cell_stencil(c, std::span<Eigen::Index>(nodes, n + 1),
                      std::span<double>(basis, (n + 1) * n1));
    for (int m = 0; m <= n; ++m)
    {
      if (nodes[m] < 0)
        continue;
      double bb = 0.0, gb = 0.0;
      for (int k = 0; k < n1; ++k)
      {
        bb += basis[m * n1 + k] * basis[m * n1 + k];
        gb += g[k] * basis[m * n1 + k];
      }
      diag[nodes[m]] += rho * bb + rank_one * gb * gb;
    }
  }
  return diag;
}

Eigen::VectorXd laplacian_diagonal(const Grid &grid)
{
  const int n1 = grid.horizontal_dim();
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(grid.num_nodes());
  Eigen::VectorXd diag(grid.num_nodes());
  double g[8];
  for (Eigen::Index i = 0; i < grid.num_nodes(); ++i)
  {
    unit[i] = 1.0;
    double sum = 0.0;
    for (const auto c : grid.cells_touching(i))
    {
      grid.cell_gradient(c, unit, std::span<double>(g, n1));
      for (int k = 0; k < n1; ++k)
        sum += g[k] * g[k];
    }
    unit[i] = 0.0;
    diag[i] = sum;
  }
  return diag;
}

DualField apply_B(const Field &u, double q)
{
  if (!(q > 1.0))
    throw Error(ErrorKind::OutOfRange, "operator B requires q > 1");
  DualField d = DualField::zeros(u.grid);
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
  {
    const double v = u.values[i];
    d.values[i] = q == 2.0 ? v : (v == 0.0 ? 0.0 : std::pow(std::abs(v), q - 2.0) * v);
  }
  return d;
}

double pairing(const DualField &d, const Field &w)
{
  require_same_grid(d.grid, w.grid);
  return d.values.dot(w.values) * d.grid->cell_volume();
}

Eigen::VectorXd basis_energy_norms(const Grid &grid, double p)
{
  const int n1 = grid.horizontal_dim();
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(grid.num_nodes());
  Eigen::VectorXd norms(grid.num_nodes());
  double g[8];
  for (Eigen::Index i = 0; i < grid.num_nodes(); ++i)
  {
    unit[i] = 1.0;
    double energy = 0.0;
    for (const auto c : grid.cells_touching(i))
    {
      grid.cell_gradient(c, unit, std::span<double>(g, n1));
      double g2 = 0.0;
      for (int k = 0; k < n1; ++k)
        g2 += g[k] * g[k];
      energy += std::pow(g2, 0.5 * p);
    }
    unit[i] = 0.0;
    norms[i] = std::pow(energy * grid.cell_volume(), 1.0 / p);
  }
  return norms;
}

double residual(const Field &u, double lam, double p, double q)
{
  return residual(u, lam, p, q, basis_energy_norms(*u.grid, p));
}

double residual(const Field &u, double lam, double p, double q, const Eigen::VectorXd &basis_norms)
{
  const double energy = p_energy(u, p, 0.0);
  if (!(energy > 0.0) || u.values.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::UndefinedEigenpair, "residual requires a nonzero field");
  const double scale = lam * std::pow(lq_norm(u, q), p - q);
  const DualField r = apply_A(u, p, 0.0) - scale * apply_B(u, q);
  const double vol = u.grid->cell_volume();
  const double worst = (r.values.cwiseAbs().array() / basis_norms.array()).maxCoeff() * vol;
  return worst / std::pow(energy, (p - 1.0) / p);
}

double vector_monotonicity_ratio(std::span<const double> a, std::span<const double> b, double p)
{
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "vectors differ in length");
  double na = 0.0, nb = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    na += a[i] * a[i];
    nb += b[i] * b[i];
    diff2 += (a[i] - b[i]) * (a[i] - b[i]);
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (diff2 == 0.0)
    throw Error(ErrorKind::OutOfRange, "monotonicity ratio needs a != b");
  const double wa = na > 0.0 ? std::pow(na, p - 2.0) : 0.0;
  const double wb = nb > 0.0 ? std::pow(nb, p - 2.0) : 0.0;
  double lhs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    lhs += (wa * a[i] - wb * b[i]) * (a[i] - b[i]);
  return lhs / (std::pow(na + nb, p - 2.0) * diff2);
}

}  // namespace subeigen
