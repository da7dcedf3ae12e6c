// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace subeigen
{

enum class ErrorKind
{
  InvalidStratification,
  OutOfRange,
  InvalidDilation,
  DimensionMismatch,
  GridMismatch,
  UndefinedEigenpair,
  IterationLimit,
  DegenerateIterate,
  NodeCapExceeded,
  InternalConsistency,
  InvalidConfig,
};

const char *to_string(ErrorKind kind);

// All library failures are reported through this type; the kind allows
// callers (and the CLI exit-code mapping) to distinguish them.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace subeigen
