// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

#include "subeigen/mesh.hpp"

namespace subeigen::oracle
{

// Reference solutions on desk-sized grids. Nothing here touches the
// gradient code used by the main solvers: the p = q = 2 path is a dense
// symmetric eigen-decomposition and the general path a derivative-free
// coordinate search on the Rayleigh quotient.

inline constexpr Eigen::Index kNodeCap = 25;
inline constexpr int kMinRestarts = 32;

enum class OracleMethod
{
  DenseEig,
  Multistart,
};

struct OracleResult
{
  double lambda_star = 0.0;
  Field minimizer;
  OracleMethod method = OracleMethod::DenseEig;
  int restarts_used = 0;
  // Set when no random restart got below the value of the positive start.
  bool warning = false;
};

/// Smallest eigenvalue of the pencil (stiffness, mass); both symmetric, mass positive definite.
double dense_min_eigenvalue(const Eigen::MatrixXd &stiffness, const Eigen::MatrixXd &mass);

/// Node-representation matrix of A at p = 2, assembled from p_energy alone.
Eigen::MatrixXd assemble_stiffness(const GridPtr &grid);

/// Discrete first eigenvalue min R(u) = p_energy(u) / ||u||_q^p on a grid with at most kNodeCap nodes.
OracleResult brute_force_lambda(const GridPtr &grid, double p, double q, int restarts = kMinRestarts,
                                std::uint64_t seed = 0, bool force_multistart = false);

struct SearchOptions
{
  int max_sweeps = 20000;
  double rel_tol = 1e-14;  // stop when a sweep improves f by less than this (relative)
};

/// Derivative-free local minimization by cyclic coordinate line searches
/// (bracketing followed by Brent's parabolic-fit search) with a pattern step
/// along each sweep's displacement.
Eigen::VectorXd minimize_coordinatewise(const std::function<double(const Eigen::VectorXd &)> &f,
                                        Eigen::VectorXd x0, const SearchOptions &opts = {});

}  // namespace subeigen::oracle
