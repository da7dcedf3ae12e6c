// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <span>

#include "subeigen/mesh.hpp"

namespace subeigen
{

/// A linear functional on fields, stored by its node representation d so that
/// <d, w> = sum_i d_i w_i * cell volume.
struct DualField
{
  GridPtr grid;
  Eigen::VectorXd values;

  static DualField zeros(GridPtr grid);

  DualField &operator+=(const DualField &other);
  DualField &operator-=(const DualField &other);
  DualField &operator*=(double t);
};

DualField operator+(DualField a, const DualField &b);
DualField operator-(DualField a, const DualField &b);
DualField operator*(double t, DualField a);

/// Divergence-form p-Laplacian:
///   <A u, w> = sum_cells (|grad_H u|^2 + eps^2)^{(p-2)/2} grad_H u . grad_H w * cell volume,
/// the gradient of (1/p) p_energy(., p, eps).
DualField apply_A(const Field &u, double p, double eps = 0.0);

/// apply_A fused with p_energy(u, p, eps) in one sweep; returns the energy.
double apply_A_with_energy(const Field &u, double p, double eps, DualField &out);

/// Diagonal of the Hessian of (1/p) p_energy(., p, eps) at u, node representation.
Eigen::VectorXd hessian_diagonal(const Field &u, double p, double eps);

/// Diagonal of the p = 2 operator in node representation.
Eigen::VectorXd laplacian_diagonal(const Grid &grid);

/// Pointwise |u|^{q-2} u.
DualField apply_B(const Field &u, double q);

double pairing(const DualField &d, const Field &w);

/// ||e_i||_U = p_energy(e_i, p)^{1/p} for every node basis field e_i.
Eigen::VectorXd basis_energy_norms(const Grid &grid, double p);

/// Weak-form discrepancy of the eigen-equation A u = lam ||u||_q^{p-q} B u,
/// measured against every normalized basis field e_i / ||e_i||_U and divided
/// by ||u||_U^{p-1}. Zero exactly at discrete eigenpairs; invariant under u -> t u.
double residual(const Field &u, double lam, double p, double q);
double residual(const Field &u, double lam, double p, double q,
                const Eigen::VectorXd &basis_norms);

/// <|a|^{p-2} a - |b|^{p-2} b, a - b> / ((|a| + |b|)^{p-2} |a - b|^2) for a != b.
/// Bounded below by a positive constant C(p).
double vector_monotonicity_ratio(std::span<const double> a, std::span<const double> b, double p);

}  // namespace subeigen
