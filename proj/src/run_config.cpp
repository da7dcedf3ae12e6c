// SPDX-License-Identifier: Apache-2.0

#include "subeigen/run_config.hpp"

#include "subeigen/error.hpp"

namespace subeigen
{

RunMethod parse_run_method(const std::string &name)
{
  if (name == "inverse")
    return RunMethod::Inverse;
  if (name == "rayleigh")
    return RunMethod::Rayleigh;
  if (name == "both")
    return RunMethod::Both;
  throw Error(ErrorKind::InvalidConfig, "unknown method '" + name + "' (inverse|rayleigh|both)");
}

std::string to_string(RunMethod method)
{
  switch (method)
  {
  case RunMethod::Inverse: return "inverse";
  case RunMethod::Rayleigh: return "rayleigh";
  case RunMethod::Both: return "both";
  }
  return "inverse";
}

RunConfig run_config_from_json(const nlohmann::json &j, RunConfig cfg)
{
  if (!j.is_object())
    throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  try
  {
    if (j.contains("group"))
      cfg.group = j.at("group").get<std::string>();
    if (j.contains("box"))
    {
      cfg.box.clear();
      for (const auto &iv : j.at("box"))
      {
        if (!iv.is_array() || iv.size() != 2)
          throw Error(ErrorKind::InvalidConfig, "box entries must be [lo, hi] pairs");
        cfg.box.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
    }
    if (j.contains("resolution"))
    {
      const auto &r = j.at("resolution");
      cfg.resolution = r.is_array() ? r.get<std::vector<int>>() : std::vector<int>{r.get<int>()};
    }
    auto read = [&](const char *key, auto &field) {
      if (j.contains(key))
        field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    read("p", cfg.p);
    read("q", cfg.q);
    read("tol_inner", cfg.tol_inner);
    read("tol_outer", cfg.tol_outer);
    read("eps_floor", cfg.eps_floor);
    read("max_outer", cfg.max_outer);
    read("max_inner", cfg.max_inner);
    read("seed", cfg.seed);
    read("output_dir", cfg.output_dir);
    read("dump_field", cfg.dump_field);
    read("oracle", cfg.oracle);
    if (j.contains("method"))
      cfg.method = parse_run_method(j.at("method").get<std::string>());
    if (j.contains("sweep_p"))
      cfg.sweep_p = j.at("sweep_p").get<std::vector<double>>();
    if (j.contains("sweep_q"))
      cfg.sweep_q = j.at("sweep_q").get<std::vector<double>>();
  }
  catch (const nlohmann::json::exception &e)
  {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
  return cfg;
}

RunConfig normalized_run_config(RunConfig cfg)
{
  const GroupDescriptor g = GroupDescriptor::from_name(cfg.group);
  const auto n = static_cast<std::size_t>(g.topological_dim());
  if (cfg.box.empty())
    cfg.box.assign(n, Interval{0.0, 1.0});
  if (cfg.resolution.empty())
    cfg.resolution.assign(n, 32);
  else if (cfg.resolution.size() == 1)
    cfg.resolution.assign(n, cfg.resolution.front());
  if (cfg.box.size() != n || cfg.resolution.size() != n)
    throw Error(ErrorKind::InvalidConfig, "box and resolution need one entry per coordinate of " +
                                              cfg.group);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!(cfg.box[i].hi > cfg.box[i].lo))
      throw Error(ErrorKind::InvalidConfig, "box intervals need lo < hi");
    if (cfg.resolution[i] < 1)
      throw Error(ErrorKind::InvalidConfig, "resolution must be >= 1");
  }
  if (!(cfg.tol_inner >= 0.0) || !(cfg.tol_outer > 0.0) || !(cfg.eps_floor > 0.0))
    throw Error(ErrorKind::InvalidConfig, "tolerances must be positive");
  if (cfg.max_outer < 1 || cfg.max_inner < 1)
    throw Error(ErrorKind::InvalidConfig, "iteration caps must be positive");
  if (cfg.output_dir.empty())
    throw Error(ErrorKind::InvalidConfig, "output directory must not be empty");
  return cfg;
}

GridPtr make_grid(const RunConfig &cfg)
{
  return Grid::build(GroupDescriptor::from_name(cfg.group), cfg.box, cfg.resolution);
}

std::string regime_violation(const RunConfig &cfg, double p, double q)
{
  return regime_violation(p, q, GroupDescriptor::from_name(cfg.group).homogeneous_dim());
}

SolverConfig make_solver_config(const RunConfig &cfg, GridPtr grid, double p, double q)
{
  SolverConfig s;
  s.grid = std::move(grid);
  s.p = p;
  s.q = q;
  s.tol_inner = cfg.tol_inner;
  s.tol_outer = cfg.tol_outer;
  s.eps_floor = cfg.eps_floor;
  s.max_outer = cfg.max_outer;
  s.max_inner = cfg.max_inner;
  s.seed = cfg.seed;
  return s;
}

}  // namespace subeigen
