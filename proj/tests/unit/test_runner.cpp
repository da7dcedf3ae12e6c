// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "subeigen/error.hpp"
#include "subeigen/runner.hpp"

using namespace subeigen;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("subeigen_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path &path)
{
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

nlohmann::json read_json(const fs::path &path)
{
  return nlohmann::json::parse(slurp(path));
}

RunConfig small_config(const fs::path &out)
{
  RunConfig cfg;
  cfg.resolution = {12};
  cfg.output_dir = out.string();
  return cfg;
}

int cli(const std::string &args)
{
  const std::string cmd = std::string(SUBEIGEN_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("runner")
{
  TEST_CASE("config parsing and defaults")
  {
    const auto j = nlohmann::json::parse(R"({"group": "heisenberg1", "resolution": [6], "p": 3,
                                             "q": 2, "method": "both", "sweep_q": [2, 3]})");
    const RunConfig cfg = normalized_run_config(run_config_from_json(j));
    CHECK(cfg.group == "heisenberg1");
    CHECK(cfg.resolution == std::vector<int>{6, 6, 6});
    CHECK(cfg.box.size() == 3);
    CHECK(cfg.box[2].hi == 1.0);
    CHECK(cfg.p == 3.0);
    CHECK(cfg.method == RunMethod::Both);
    CHECK(cfg.is_sweep());

    const RunConfig plain = normalized_run_config({});
    CHECK(plain.resolution == std::vector<int>{32, 32});
    CHECK_FALSE(plain.is_sweep());

    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"method": "newton"})")), Error);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"p": "two"})")), Error);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse("[1, 2]")), Error);
    RunConfig bad;
    bad.resolution = {4, 4, 4};
    CHECK_THROWS_AS(normalized_run_config(bad), Error);
    bad = {};
    bad.group = "heisenberg7";
    CHECK_THROWS_AS(normalized_run_config(bad), Error);
  }

  TEST_CASE("single run writes its artifacts")
  {
    const fs::path out = scratch("run");
    RunConfig cfg = small_config(out);
    cfg.dump_field = true;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitConverged);
    const auto summary = read_json(out / "summary.json");
    CHECK(summary["converged"] == true);
    CHECK(summary["lambda_hat"].get<double>() > 0.0);
    CHECK(summary["regularity"]["positive"] == true);
    CHECK(summary.contains("runtime_seconds"));
    const std::string trace = slurp(out / "trace.csv");
    CHECK(trace.rfind("n,mu_n,unorm_p,lq_change,inner_iters,residual\n", 0) == 0);
    const std::string field = slurp(out / "field.csv");
    CHECK(field.rfind("x,y,value\n", 0) == 0);
    CHECK(std::count(field.begin(), field.end(), '\n') == 1 + 144);
  }

  TEST_CASE("unit square reaches 2 pi^2")
  {
    const fs::path out = scratch("square");
    RunConfig cfg = small_config(out);
    cfg.resolution = {64};
    std::ostringstream log;
    CHECK(execute(cfg, log) == kExitConverged);
    const double lambda = read_json(out / "summary.json")["lambda_hat"];
    CHECK(lambda == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(0.01));
  }

  TEST_CASE("method both reports the gap")
  {
    const fs::path out = scratch("both");
    RunConfig cfg = small_config(out);
    cfg.method = RunMethod::Both;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitConverged);
    const auto summary = read_json(out / "summary.json");
    CHECK(summary.contains("lambda_inverse"));
    CHECK(summary.contains("lambda_rayleigh"));
    CHECK(summary["relative_gap"].get<double>() < 1e-4);
    CHECK(fs::exists(out / "trace_rayleigh.csv"));
  }

  TEST_CASE("oracle comparison on a small grid")
  {
    const fs::path out = scratch("oracle");
    RunConfig cfg = small_config(out);
    cfg.resolution = {4};
    cfg.p = 3.0;
    cfg.oracle = true;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitConverged);
    const auto oracle = read_json(out / "summary.json")["oracle"];
    CHECK(oracle["method"] == "multistart");
    CHECK(oracle["relative_gap"].get<double>() < 1e-4);
  }

  TEST_CASE("out-of-regime exponents")
  {
    const fs::path out = scratch("regime");
    RunConfig cfg = small_config(out);
    cfg.group = "heisenberg1";
    cfg.resolution = {4};
    cfg.q = 4.0;
    std::ostringstream log;
    CHECK(execute(cfg, log) == kExitConfigError);
    CHECK(log.str().find("subcritical") != std::string::npos);
    CHECK_FALSE(fs::exists(out / "summary.json"));
  }

  TEST_CASE("sweeps")
  {
    const fs::path single_out = scratch("sweep_single");
    RunConfig single = small_config(single_out);
    std::ostringstream log;
    REQUIRE(run(single, log) == kExitConverged);
    const double lambda = read_json(single_out / "summary.json")["lambda_hat"];

    const fs::path out = scratch("sweep");
    RunConfig cfg = small_config(out);
    cfg.sweep_p = std::vector<double>{2.0};
    cfg.sweep_q = std::vector<double>{2.0};
    CHECK(execute(cfg, log) == kExitConverged);
    std::ostringstream expected;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", lambda);
    CHECK(slurp(out / "results.csv").find(std::string("2,2,") + buf + ",") != std::string::npos);

    const fs::path grid_out = scratch("sweep_grid");
    cfg = small_config(grid_out);
    cfg.group = "heisenberg1";
    cfg.resolution = {5};
    cfg.sweep_p = std::vector<double>{3.0, 1.5};
    cfg.sweep_q = std::vector<double>{3.0, 2.0, 2.0};
    std::ostringstream sweep_log;
    execute(cfg, sweep_log);
    CHECK(sweep_log.str().find("skipping (p, q) = (1.5, 3)") != std::string::npos);
    std::istringstream rows(slurp(grid_out / "results.csv"));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "p,q,lambda_hat,residual,outer_iters,converged");
    std::vector<std::pair<double, double>> seen;
    while (std::getline(rows, line))
    {
      double p = 0, q = 0, lam = 0;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &p, &q, &lam) == 3);
      CHECK(lam > 0.0);
      seen.emplace_back(p, q);
    }
    CHECK(seen == std::vector<std::pair<double, double>>{{1.5, 2.0}, {3.0, 2.0}, {3.0, 3.0}});

    cfg.sweep_p = std::vector<double>{1.5};
    cfg.sweep_q = std::vector<double>{3.0};
    CHECK(execute(cfg, sweep_log) == kExitConfigError);
  }

  TEST_CASE("command line")
  {
    const fs::path out = scratch("cli");
    CHECK(cli("--resolution 8 --p 2 --q 2 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "summary.json"));
    CHECK(cli("--group heisenberg1 --resolution 4 --p 2 --q 5 --out " + out.string()) == 1);
    CHECK(cli("--method newton --out " + out.string()) == 1);
    CHECK(cli("--resolution 8 --max-outer 1 --out " + out.string()) == 2);

    const fs::path cfg = scratch("cli_cfg.json");
    {
      std::ofstream os(cfg);
      os << R"({"resolution": [8], "p": 3, "q": 2})";
    }
    const fs::path out2 = scratch("cli_cfg");
    CHECK(cli("--config " + cfg.string() + " --q 1.5 --out " + out2.string()) == 0);
    const auto summary = read_json(out2 / "summary.json");
    CHECK(summary["p"] == 3.0);
    CHECK(summary["q"] == 1.5);
  }
}
