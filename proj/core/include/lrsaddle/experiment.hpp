#pragma once

#include <optional>
#include <string>

#include "lrsaddle/problem_io.hpp"

namespace lrsaddle {

struct RunOptions {
  std::string problem_path;
  std::string config_path;          ///< optional; defaults apply when empty
  std::string trace_path;           ///< optional
  std::string out_path;             ///< optional result JSON path
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

/// Verbosity from the SADDLE_LOG environment variable (0 when unset).
int log_level();

/// Builds the instance, runs the solver, and writes the requested
/// artifacts. Returns 0 on convergence and 2 on budget exhaustion.
/// Schema and numerical failures propagate as exceptions; the CLI maps
/// them to exit code 1.
int run_solve_experiment(const RunOptions& opts);

/// Region and curvature-bound diagnostics for a problem with ground truth. Writes a
/// JSON report to out_path when given, otherwise to stdout.
int run_diagnose(const std::string& problem_path, const std::string& out_path,
                 int samples_per_region, std::optional<std::uint64_t> seed);

/// Deterministic initial iterate for a solve: Gaussian factors scaled to
/// the data's spectral-norm estimate.
FactorPair initial_iterate(const ObjectiveHandle& h, std::uint64_t seed);

}  // namespace lrsaddle
