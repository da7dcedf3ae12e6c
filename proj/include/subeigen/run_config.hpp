// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subeigen/eigensolver.hpp"
#include "subeigen/mesh.hpp"

namespace subeigen
{

enum class RunMethod
{
  Inverse,
  Rayleigh,
  Both,
};

RunMethod parse_run_method(const std::string &name);
std::string to_string(RunMethod method);

struct RunConfig
{
  std::string group = "euclidean2";
  std::vector<Interval> box;     // empty: unit box
  std::vector<int> resolution;   // one entry broadcasts to every axis; empty: 32
  double p = 2.0;
  double q = 2.0;
  RunMethod method = RunMethod::Inverse;
  double tol_inner = 0.0;  // 0: per-exponent default
  double tol_outer = 1e-6;
  double eps_floor = 1e-6;
  int max_outer = 500;
  int max_inner = 100000;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  bool dump_field = false;
  bool oracle = false;
  std::optional<std::vector<double>> sweep_p;
  std::optional<std::vector<double>> sweep_q;

  bool is_sweep() const { return sweep_p.has_value() || sweep_q.has_value(); }
};

/// Reads the keys of RunConfig (same names) from a JSON object; absent keys keep defaults.
RunConfig run_config_from_json(const nlohmann::json &j, RunConfig base = {});

/// Fills in the box/resolution defaults and checks every field except the
/// (p, q) regime. Throws Error(InvalidConfig).
RunConfig normalized_run_config(RunConfig cfg);

GridPtr make_grid(const RunConfig &cfg);

/// Empty when (p, q) is admissible for the configured group.
std::string regime_violation(const RunConfig &cfg, double p, double q);

SolverConfig make_solver_config(const RunConfig &cfg, GridPtr grid, double p, double q);

}  // namespace subeigen
