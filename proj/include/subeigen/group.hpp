// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subeigen
{

enum class GroupKind
{
  Euclidean2,
  Heisenberg1,
};

/// Stratified (Carnot) group in exponential coordinates.
///
/// Coordinates are ordered layer by layer, so coordinate j belongs to layer
/// `degree(j)`. Horizontal fields act on the first `horizontal_dim()`
/// coordinates; for Heisenberg1 the symmetric model
///   X1 = d/dx - (y/2) d/dt,   X2 = d/dy + (x/2) d/dt
/// is used, which makes Lebesgue measure the Haar measure.
class GroupDescriptor
{
public:
  static GroupDescriptor euclidean2();
  static GroupDescriptor heisenberg1();
  static GroupDescriptor from_name(std::string_view name);

  GroupKind kind() const { return kind_; }
  std::string name() const;
  const std::vector<int> &layers() const { return layers_; }
  int topological_dim() const { return topological_dim_; }
  int homogeneous_dim() const { return homogeneous_dim_; }
  int horizontal_dim() const { return layers_.front(); }

  /// Layer index (1-based) of coordinate `axis`; this is the dilation exponent.
  int degree(int axis) const { return degrees_.at(static_cast<std::size_t>(axis)); }
  const std::vector<int> &degrees() const { return degrees_; }

  /// Coefficient of d/d(axis) in horizontal field `field`, evaluated at `point`.
  double frame_coefficient(int field, int axis, std::span<const double> point) const;

  bool operator==(const GroupDescriptor &other) const { return kind_ == other.kind_; }

private:
  GroupDescriptor(GroupKind kind, std::vector<int> layers);

  GroupKind kind_;
  std::vector<int> layers_;
  std::vector<int> degrees_;
  int topological_dim_;
  int homogeneous_dim_;
};

/// nu = sum_i i * n_i over the stratification (1-based layer index).
int homogeneous_dimension(std::span<const int> layers);

/// nu p / (nu - p); requires 1 < p < nu.
double critical_exponent(double p, int nu);

/// Upper bound for q in the admissible regime: the critical exponent when
/// p < nu, +infinity when p >= nu (every L^q embedding holds then).
double admissible_q_bound(double p, int nu);

/// Returns an empty string when 1 < p and 1 < q < admissible_q_bound(p, nu),
/// otherwise a message naming the violated inequality.
std::string regime_violation(double p, double q, int nu);

/// Layer-graded scaling x_{ik} -> s^i x_{ik}.
std::vector<double> dilate(std::span<const double> point, double s, const GroupDescriptor &g);

}  // namespace subeigen
