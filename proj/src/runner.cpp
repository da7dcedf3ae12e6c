// SPDX-License-Identifier: Apache-2.0

#include "subeigen/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include "subeigen/error.hpp"
#include "subeigen/oracle.hpp"

namespace subeigen
{

namespace
{

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path &path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
  return os;
}

nlohmann::ordered_json box_json(const RunConfig &cfg)
{
  auto box = nlohmann::ordered_json::array();
  for (const auto &iv : cfg.box)
    box.push_back({iv.lo, iv.hi});
  return box;
}

int workers_from_env()
{
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *env = std::getenv("SUBEIGEN_THREADS"))
  {
    const int requested = std::atoi(env);
    if (requested > 0)
      n = requested;
  }
  return n;
}

EigenResult solve(RunMethod method, const SolverConfig &s)
{
  return method == RunMethod::Rayleigh ? rayleigh_minimize(s) : inverse_iteration(s);
}

}  // namespace

void write_trace_csv(std::ostream &os, const EigenResult &r)
{
  os << "n,mu_n,unorm_p,lq_change,inner_iters,residual\n";
  for (std::size_t n = 0; n < r.mu_trace.size(); ++n)
    os << n << ',' << fmt(r.mu_trace[n]) << ',' << fmt(r.unorm_trace[n]) << ','
       << fmt(r.change_trace[n]) << ',' << r.inner_iters[n] << ',' << fmt(r.residual_trace[n])
       << '\n';
}

nlohmann::ordered_json regularity_to_json(const RegularityReport &rep)
{
  nlohmann::ordered_json j;
  j["sup_norm"] = rep.sup_norm;
  j["sobolev_constant"] = rep.sobolev_constant;
  j["l1_norm"] = rep.l1_norm;
  j["case"] = rep.threshold.case_tag == BoundCase::I ? "I" : "II";
  j["k_threshold"] = rep.threshold.k;
  j["k_raw"] = rep.threshold.k_raw;
  if (rep.threshold.case_tag == BoundCase::II)
    j["alpha"] = rep.threshold.alpha;
  else
    j["alpha"] = nullptr;
  auto levels = nlohmann::ordered_json::array();
  for (const auto &[k, m] : rep.level_measures)
    levels.push_back({k, m});
  j["level_measures"] = levels;
  j["decay_holds"] = rep.decay_holds;
  j["min_on_core"] = rep.min_on_core;
  j["positive"] = rep.positive;
  return j;
}

int run(const RunConfig &raw, std::ostream &log)
{
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = normalized_run_config(raw);
  if (const auto why = regime_violation(cfg, cfg.p, cfg.q); !why.empty())
    throw Error(ErrorKind::OutOfRange, "(p, q) outside the admissible regime: " + why);

  const GridPtr grid = make_grid(cfg);
  const SolverConfig s = make_solver_config(cfg, grid, cfg.p, cfg.q);
  const std::filesystem::path out(cfg.output_dir);
  std::filesystem::create_directories(out);

  nlohmann::ordered_json summary;
  summary["group"] = cfg.group;
  summary["box"] = box_json(cfg);
  summary["resolution"] = cfg.resolution;
  summary["p"] = cfg.p;
  summary["q"] = cfg.q;
  summary["method"] = to_string(cfg.method);

  EigenResult primary;
  try
  {
    primary = solve(cfg.method, s);
    if (cfg.method == RunMethod::Both)
    {
      const EigenResult second = rayleigh_minimize(s);
      auto os = open_output(out / "trace_rayleigh.csv");
      write_trace_csv(os, second);
      summary["lambda_inverse"] = primary.lambda_hat;
      summary["lambda_rayleigh"] = second.lambda_hat;
      summary["relative_gap"] =
          std::abs(primary.lambda_hat - second.lambda_hat) / primary.lambda_hat;
      summary["rayleigh_converged"] = second.converged;
      summary["rayleigh_residual"] = second.residual;
      primary.converged = primary.converged && second.converged;
    }
  }
  catch (const Error &e)
  {
    if (e.kind() != ErrorKind::IterationLimit && e.kind() != ErrorKind::DegenerateIterate)
      throw;
    log << "solver failed: " << e.what() << '\n';
    summary["lambda_hat"] = nullptr;
    summary["converged"] = false;
    summary["error"] = e.what();
    auto os = open_output(out / "summary.json");
    os << summary.dump(2) << '\n';
    return kExitNotConverged;
  }

  summary["lambda_hat"] = primary.lambda_hat;
  summary["converged"] = primary.converged;
  summary["outer_iters"] = primary.outer_iters;
  summary["residual"] = primary.residual;

  const int nu = grid->group().homogeneous_dim();
  const double sobolev = sobolev_constant_from_lambda(primary.lambda_hat, cfg.p, cfg.q,
                                                      grid->domain_volume(), nu);
  summary["regularity"] = regularity_to_json(
      regularity_report(primary.eigenfunction, primary.lambda_hat, cfg.p, cfg.q, sobolev));

  if (cfg.oracle)
  {
    nlohmann::ordered_json o;
    if (grid->num_nodes() <= oracle::kNodeCap)
    {
      const auto ref = oracle::brute_force_lambda(grid, cfg.p, cfg.q, oracle::kMinRestarts, cfg.seed);
      o["lambda_star"] = ref.lambda_star;
      o["method"] = ref.method == oracle::OracleMethod::DenseEig ? "dense_eig" : "multistart";
      o["restarts_used"] = ref.restarts_used;
      o["warning"] = ref.warning;
      o["relative_gap"] = std::abs(primary.lambda_hat - ref.lambda_star) / ref.lambda_star;
    }
    else
    {
      o["skipped"] = "grid has more than 25 interior nodes";
    }
    summary["oracle"] = o;
  }

  {
    auto os = open_output(out / "trace.csv");
    write_trace_csv(os, primary);
  }
  if (cfg.dump_field)
  {
    auto os = open_output(out / "field.csv");
    write_field_csv(os, primary.eigenfunction);
  }

  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary["runtime_seconds"] = runtime;
  {
    auto os = open_output(out / "summary.json");
    os << summary.dump(2) << '\n';
  }
  log << "lambda_hat = " << fmt(primary.lambda_hat) << " (residual " << fmt(primary.residual)
      << ", " << primary.outer_iters << " iterations, "
      << (primary.converged ? "converged" : "NOT converged") << ")\n";
  return primary.converged ? kExitConverged : kExitNotConverged;
}

int sweep(const RunConfig &raw, std::ostream &log)
{
  const RunConfig cfg = normalized_run_config(raw);
  const std::vector<double> ps = cfg.sweep_p.value_or(std::vector<double>{cfg.p});
  const std::vector<double> qs = cfg.sweep_q.value_or(std::vector<double>{cfg.q});

  std::set<std::pair<double, double>> unique;
  for (const double p : ps)
    for (const double q : qs)
    {
      if (const auto why = regime_violation(cfg, p, q); !why.empty())
      {
        log << "skipping (p, q) = (" << fmt(p) << ", " << fmt(q) << "): " << why << '\n';
        continue;
      }
      unique.emplace(p, q);
    }
  const std::vector<std::pair<double, double>> pairs(unique.begin(), unique.end());
  if (pairs.empty())
    throw Error(ErrorKind::InvalidConfig, "no admissible (p, q) pair in the sweep");

  const GridPtr grid = make_grid(cfg);
  const RunMethod method = cfg.method == RunMethod::Both ? RunMethod::Inverse : cfg.method;

  struct Row
  {
    double lambda = 0.0;
    double residual = 0.0;
    int outer = 0;
    bool converged = false;
    std::string error;
  };
  std::vector<Row> rows(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++)
    {
      const auto [p, q] = pairs[i];
      try
      {
        const EigenResult r = solve(method, make_solver_config(cfg, grid, p, q));
        rows[i] = {r.lambda_hat, r.residual, r.outer_iters, r.converged, {}};
      }
      catch (const Error &e)
      {
        rows[i].error = e.what();
      }
    }
  };
  const int n_workers = std::min<int>(workers_from_env(), static_cast<int>(pairs.size()));
  std::vector<std::jthread> pool;
  for (int w = 1; w < n_workers; ++w)
    pool.emplace_back(worker);
  worker();
  pool.clear();

  const std::filesystem::path out(cfg.output_dir);
  std::filesystem::create_directories(out);
  auto os = open_output(out / "results.csv");
  os << "p,q,lambda_hat,residual,outer_iters,converged\n";
  bool all_converged = true;
  for (std::size_t i = 0; i < pairs.size(); ++i)
  {
    const auto &row = rows[i];
    if (!row.error.empty())
      log << "(p, q) = (" << fmt(pairs[i].first) << ", " << fmt(pairs[i].second)
          << ") failed: " << row.error << '\n';
    os << fmt(pairs[i].first) << ',' << fmt(pairs[i].second) << ','
       << (row.error.empty() ? fmt(row.lambda) : "nan") << ','
       << (row.error.empty() ? fmt(row.residual) : "nan") << ',' << row.outer << ','
       << (row.converged ? "true" : "false") << '\n';
    all_converged = all_converged && row.converged;
  }
  log << "wrote " << pairs.size() << " rows to " << (out / "results.csv").string() << '\n';
  return all_converged ? kExitConverged : kExitNotConverged;
}

int execute(const RunConfig &cfg, std::ostream &log)
{
  try
  {
    return cfg.is_sweep() ? sweep(cfg, log) : run(cfg, log);
  }
  catch (const Error &e)
  {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  catch (const std::filesystem::filesystem_error &e)
  {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace subeigen
