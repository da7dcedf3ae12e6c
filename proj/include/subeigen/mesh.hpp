// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "subeigen/group.hpp"

namespace subeigen
{

struct Interval
{
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

/// Cartesian grid on a box with homogeneous Dirichlet data.
///
/// Interior node i_j (0 <= i_j < n_j) sits at lo_j + (i_j + 1) h_j with
/// h_j = (hi_j - lo_j) / (n_j + 1). Horizontal gradients live on cells,
/// indexed by their lower corner c_j in [-1, n_j - 1]; a cell's gradient uses
/// forward differences from its corner, and values off the interior read as 0.
/// There are prod (n_j + 1) cells of volume prod h_j, tiling the box exactly.
class Grid
{
public:
  static std::shared_ptr<const Grid> build(const GroupDescriptor &group, std::vector<Interval> box,
                                           std::vector<int> resolution);

  const GroupDescriptor &group() const { return group_; }
  const std::vector<Interval> &box() const { return box_; }
  const std::vector<int> &resolution() const { return resolution_; }
  const std::vector<double> &spacing() const { return spacing_; }
  int dim() const { return static_cast<int>(resolution_.size()); }
  int horizontal_dim() const { return group_.horizontal_dim(); }
  Eigen::Index num_nodes() const { return num_nodes_; }
  Eigen::Index num_cells() const { return num_cells_; }
  double cell_volume() const { return cell_volume_; }
  double domain_volume() const;

  std::vector<int> node_multi_index(Eigen::Index node) const;
  Eigen::Index node_index(std::span<const int> multi) const;
  std::vector<double> node_coordinates(Eigen::Index node) const;
  double node_coordinate(Eigen::Index node, int axis) const;

  /// Horizontal gradient of `values` on cell `cell`, written to `out` (length horizontal_dim()).
  void cell_gradient(Eigen::Index cell, const Eigen::VectorXd &values, std::span<double> out) const;

  /// Adds the transpose of the cell gradient applied to `flux` into `accum`.
  void scatter_cell_adjoint(Eigen::Index cell, std::span<const double> flux,
                            Eigen::VectorXd &accum) const;

  /// Local stencil of a cell: for the corner and each forward neighbour
  /// (N + 1 entries) the node index, or -1 off the interior, and the gradient
  /// of that node's unit basis field on the cell (horizontal_dim() values each).
  void cell_stencil(Eigen::Index cell, std::span<Eigen::Index> nodes,
                    std::span<double> basis_gradients) const;

  /// Cells whose gradient reads node `node`.
  std::vector<Eigen::Index> cells_touching(Eigen::Index node) const;

  bool operator==(const Grid &other) const;

private:
  Grid() = default;

  GroupDescriptor group_ = GroupDescriptor::euclidean2();
  std::vector<Interval> box_;
  std::vector<int> resolution_;
  std::vector<double> spacing_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index num_nodes_ = 0;
  Eigen::Index num_cells_ = 0;
  double cell_volume_ = 0.0;

  // Per cell: corner node (-1 when off-interior), then the forward neighbour
  // along each axis; per cell the horizontal frame coefficients (n1 x N).
  std::vector<Eigen::Index> cell_nodes_;
  std::vector<double> frame_;
};

using GridPtr = std::shared_ptr<const Grid>;

void require_same_grid(const GridPtr &a, const GridPtr &b);

/// Real value per interior node; implicitly zero on and outside the boundary.
struct Field
{
  GridPtr grid;
  Eigen::VectorXd values;

  static Field zeros(GridPtr grid);
  static Field constant(GridPtr grid, double value);
  static Field sample(GridPtr grid, const std::function<double(std::span<const double>)> &f);

  Field &operator+=(const Field &other);
  Field &operator-=(const Field &other);
  Field &operator*=(double t);
};

Field operator+(Field a, const Field &b);
Field operator-(Field a, const Field &b);
Field operator*(double t, Field a);
Field operator-(Field a);

/// Horizontal gradient on every cell: values(cell, k) = X_k u on that cell.
struct HField
{
  GridPtr grid;
  Eigen::MatrixXd values;
};

HField horizontal_gradient(const Field &u);

/// sum over cells of (|grad_H u|^2 + eps^2)^{p/2} * cell volume.
double p_energy(const Field &u, double p, double eps = 0.0);

/// (sum_i |u_i|^q * cell volume)^{1/q}.
double lq_norm(const Field &u, double q);

/// One CSV row per interior node: coordinates then value; header names the axes.
void write_field_csv(std::ostream &os, const Field &u);

}  // namespace subeigen
