// SPDX-License-Identifier: Apache-2.0

#include "subeigen/group.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "subeigen/error.hpp"

namespace subeigen
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::InvalidStratification: return "invalid stratification";
  case ErrorKind::OutOfRange: return "out of range";
  case ErrorKind::InvalidDilation: return "invalid dilation";
  case ErrorKind::DimensionMismatch: return "dimension mismatch";
  case ErrorKind::GridMismatch: return "grid mismatch";
  case ErrorKind::UndefinedEigenpair: return "undefined eigenpair";
  case ErrorKind::IterationLimit: return "iteration limit";
  case ErrorKind::DegenerateIterate: return "degenerate iterate";
  case ErrorKind::NodeCapExceeded: return "node cap exceeded";
  case ErrorKind::InternalConsistency: return "internal consistency";
  case ErrorKind::InvalidConfig: return "invalid config";
  }
  return "unknown";
}

int homogeneous_dimension(std::span<const int> layers)
{
  if (layers.empty())
    throw Error(ErrorKind::InvalidStratification, "empty layer list");
  if (layers.front() < 2)
    throw Error(ErrorKind::InvalidStratification, "first layer must have dimension >= 2");
  int nu = 0;
  for (std::size_t i = 0; i < layers.size(); ++i)
  {
    if (layers[i] < 1)
      throw Error(ErrorKind::InvalidStratification, "layer dimensions must be positive");
    nu += static_cast<int>(i + 1) * layers[i];
  }
  return nu;
}

double critical_exponent(double p, int nu)
{
  if (!(p > 1.0) || !(p < nu))
  {
    std::ostringstream msg;
    msg << "critical exponent requires 1 < p < nu (p = " << p << ", nu = " << nu << ")";
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  return nu * p / (nu - p);
}

double admissible_q_bound(double p, int nu)
{
  if (p < nu)
    return critical_exponent(p, nu);
  return std::numeric_limits<double>::infinity();
}

std::string regime_violation(double p, double q, int nu)
{
  std::ostringstream msg;
  if (!(p > 1.0))
  {
    msg << "requires 1 < p (got p = " << p << ")";
    return msg.str();
  }
  if (!(q > 1.0))
  {
    msg << "requires 1 < q (got q = " << q << ")";
    return msg.str();
  }
  const double bound = admissible_q_bound(p, nu);
  if (!(q < bound))
  {
    msg << "requires subcritical q < nu* = nu p/(nu - p) = " << bound << " (got q = " << q
        << ", p = " << p << ", nu = " << nu << ")";
    return msg.str();
  }
  return {};
}

GroupDescriptor::GroupDescriptor(GroupKind kind, std::vector<int> layers)
  : kind_(kind), layers_(std::move(layers))
{
  homogeneous_dim_ = homogeneous_dimension(layers_);
  topological_dim_ = std::accumulate(layers_.begin(), layers_.end(), 0);
  for (std::size_t i = 0; i < layers_.size(); ++i)
    degrees_.insert(degrees_.end(), static_cast<std::size_t>(layers_[i]), static_cast<int>(i + 1));
}

GroupDescriptor GroupDescriptor::euclidean2() { return {GroupKind::Euclidean2, {2}}; }

GroupDescriptor GroupDescriptor::heisenberg1() { return {GroupKind::Heisenberg1, {2, 1}}; }

GroupDescriptor GroupDescriptor::from_name(std::string_view name)
{
  if (name == "euclidean2")
    return euclidean2();
  if (name == "heisenberg1")
    return heisenberg1();
  throw Error(ErrorKind::InvalidConfig, "unknown group '" + std::string(name) + "'");
}

std::string GroupDescriptor::name() const
{
  switch (kind_)
  {
  case GroupKind::Euclidean2: return "euclidean2";
  case GroupKind::Heisenberg1: return "heisenberg1";
  }
  return "unknown";
}

double GroupDescriptor::frame_coefficient(int field, int axis, std::span<const double> point) const
{
  if (field == axis)
    return 1.0;
  if (kind_ == GroupKind::Heisenberg1 && axis == 2)
    return field == 0 ? -0.5 * point[1] : 0.5 * point[0];
  return 0.0;
}

std::vector<double> dilate(std::span<const double> point, double s, const GroupDescriptor &g)
{
  if (!(s > 0.0))
    throw Error(ErrorKind::InvalidDilation, "dilation factor must be positive");
  if (static_cast<int>(point.size()) != g.topological_dim())
    throw Error(ErrorKind::DimensionMismatch, "point length differs from group dimension");
  std::vector<double> out(point.begin(), point.end());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] *= std::pow(s, g.degree(static_cast<int>(j)));
  return out;
}

}  // namespace subeigen
