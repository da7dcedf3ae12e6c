// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "subeigen/error.hpp"
#include "subeigen/runner.hpp"

int main(int argc, char **argv)
{
  using namespace subeigen;

  CLI::App app{"First Dirichlet (p,q)-eigenpair of the horizontal p-Laplacian on Carnot-group boxes"};
  app.option_defaults()->always_capture_default();

  std::string config_path;
  std::string group, method;
  std::vector<double> box;
  std::vector<int> resolution;
  double p = 0, q = 0, tol_inner = 0, tol_outer = 0, eps_floor = 0;
  int max_outer = 0, max_inner = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool dump_field = false, use_oracle = false;
  std::vector<double> sweep_p, sweep_q;

  app.add_option("--config", config_path, "JSON config file; flags override its keys")
      ->check(CLI::ExistingFile);
  auto *o_group = app.add_option("--group", group, "euclidean2 | heisenberg1");
  auto *o_box = app.add_option("--box", box, "lo hi per axis, e.g. --box 0 1 0 1");
  auto *o_res = app.add_option("--resolution", resolution, "interior nodes per axis (one value broadcasts)");
  auto *o_p = app.add_option("--p", p, "gradient exponent p > 1");
  auto *o_q = app.add_option("--q", q, "L^q exponent, 1 < q < nu*");
  auto *o_method = app.add_option("--method", method, "inverse | rayleigh | both");
  auto *o_tin = app.add_option("--tol-inner", tol_inner, "inner relative gradient tolerance");
  auto *o_tout = app.add_option("--tol-outer", tol_outer, "outer stopping tolerance");
  auto *o_eps = app.add_option("--eps-floor", eps_floor, "final relative regularization for p < 2");
  auto *o_mo = app.add_option("--max-outer", max_outer, "outer iteration cap");
  auto *o_mi = app.add_option("--max-inner", max_inner, "inner iteration cap");
  auto *o_seed = app.add_option("--seed", seed, "random seed (oracle restarts)");
  auto *o_out = app.add_option("--out", out, "output directory");
  auto *o_dump = app.add_flag("--dump-field", dump_field, "write field.csv");
  auto *o_oracle = app.add_flag("--oracle", use_oracle, "brute-force reference on grids with <= 25 nodes");
  auto *o_sp = app.add_option("--sweep-p", sweep_p, "p values for a sweep");
  auto *o_sq = app.add_option("--sweep-q", sweep_q, "q values for a sweep");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try
  {
    if (!config_path.empty())
    {
      std::ifstream is(config_path);
      nlohmann::json j;
      try
      {
        is >> j;
      }
      catch (const nlohmann::json::exception &e)
      {
        throw Error(ErrorKind::InvalidConfig, std::string("cannot parse config: ") + e.what());
      }
      cfg = run_config_from_json(j);
    }
    if (*o_group)
      cfg.group = group;
    if (*o_box)
    {
      if (box.size() % 2 != 0)
        throw Error(ErrorKind::InvalidConfig, "--box needs an even number of values");
      cfg.box.clear();
      for (std::size_t i = 0; i < box.size(); i += 2)
        cfg.box.push_back({box[i], box[i + 1]});
    }
    if (*o_res)
      cfg.resolution = resolution;
    if (*o_p)
      cfg.p = p;
    if (*o_q)
      cfg.q = q;
    if (*o_method)
      cfg.method = parse_run_method(method);
    if (*o_tin)
      cfg.tol_inner = tol_inner;
    if (*o_tout)
      cfg.tol_outer = tol_outer;
    if (*o_eps)
      cfg.eps_floor = eps_floor;
    if (*o_mo)
      cfg.max_outer = max_outer;
    if (*o_mi)
      cfg.max_inner = max_inner;
    if (*o_seed)
      cfg.seed = seed;
    if (*o_out)
      cfg.output_dir = out;
    if (*o_dump)
      cfg.dump_field = dump_field;
    if (*o_oracle)
      cfg.oracle = use_oracle;
    if (*o_sp)
      cfg.sweep_p = sweep_p;
    if (*o_sq)
      cfg.sweep_q = sweep_q;
  }
  catch (const Error &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  return execute(cfg, std::cerr);
}
