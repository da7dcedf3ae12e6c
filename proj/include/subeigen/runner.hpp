// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "subeigen/diagnostics.hpp"
#include "subeigen/eigensolver.hpp"
#include "subeigen/run_config.hpp"

namespace subeigen
{

inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNotConverged = 2;

/// Columns: n, mu_n, unorm_p, lq_change, inner_iters, residual.
void write_trace_csv(std::ostream &os, const EigenResult &r);

nlohmann::ordered_json regularity_to_json(const RegularityReport &rep);

/// Single solve: writes summary.json, trace.csv (plus trace_rayleigh.csv for
/// method "both") and optionally field.csv into cfg.output_dir.
int run(const RunConfig &cfg, std::ostream &log);

/// One results.csv row per admissible (p, q) pair, lexicographic in (p, q).
/// Pair solves run on a pool of SUBEIGEN_THREADS workers.
int sweep(const RunConfig &cfg, std::ostream &log);

/// run() or sweep() depending on the sweep lists; maps config errors to exit 1.
int execute(const RunConfig &cfg, std::ostream &log);

}  // namespace subeigen
