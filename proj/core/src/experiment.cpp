#include "lrsaddle/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "lrsaddle/rng.hpp"

namespace lrsaddle {

int log_level() {
  const char* env = std::getenv("SADDLE_LOG");
  if (!env || !*env) return 0;
  return std::atoi(env);
}

FactorPair initial_iterate(const ObjectiveHandle& h, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x17));
  const double sigma_hat = default_gamma0(h, seed);
  const double scale =
      std::sqrt(sigma_hat / static_cast<double>(h.r())) /
      std::pow(static_cast<double>(h.n() * h.m()), 0.25);
  return {scale * rng.gaussian_matrix(h.n(), h.r()), scale * rng.gaussian_matrix(h.m(), h.r())};
}

int run_solve_experiment(const RunOptions& opts) {
  const ProblemSpec spec = load_problem(opts.problem_path);
  const BuiltProblem problem = build_problem(spec);
  SolverConfig config = opts.config_path.empty() ? SolverConfig{} : load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;

  ObjectiveHandle handle(problem.oracle, problem.r);
  const FactorPair w0 = initial_iterate(handle, config.seed);

  SolveObserver observer;
  if (log_level() >= 2) {
    observer = [](const IterationRecord& rec, const FactorPair&) {
      std::fprintf(stderr, "[lrsaddle] k=%d %s gamma=%.3e |g|=%.3e G=%.6e nu=%.3e T=%d\n", rec.k,
                   to_string(rec.kind), rec.gamma, rec.grad_norm, rec.g_value, rec.nu,
                   rec.local_iters);
    };
  }

  const auto [result, trace] = solve(handle, w0, config, observer);

  if (!opts.trace_path.empty()) write_trace_csv(opts.trace_path, trace);
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw std::runtime_error("cannot open result file for writing: " + opts.out_path);
    out << result_to_json(result).dump(2) << "\n";
  }
  if (log_level() >= 1) {
    std::fprintf(stderr,
                 "[lrsaddle] %s after %d outer / %ld inner iterations "
                 "(|g|=%.3e, surrogate=%.3e, g_evals=%lld, hvp_evals=%lld)\n",
                 to_string(result.termination_reason), result.outer_iters,
                 result.total_inner_iters, result.grad_norm, result.surrogate,
                 static_cast<long long>(result.g_evals), static_cast<long long>(result.hvp_evals));
  }
  return result.converged ? 0 : 2;
}

int run_diagnose(const std::string& problem_path, const std::string& out_path,
                 int samples_per_region, std::optional<std::uint64_t> seed) {
  const ProblemSpec spec = load_problem(problem_path);
  const BuiltProblem problem = build_problem(spec);
  if (!problem.ground_truth) {
    throw std::runtime_error(
        "diagnose requires ground truth: use a generated problem or full-observation data");
  }
  const GroundTruth& gt = *problem.ground_truth;
  ObjectiveHandle handle(problem.oracle, problem.r);

  const RegionAuditReport audit =
      verify_region_inequalities(handle, gt, samples_per_region, seed.value_or(0));

  // Curvature-bound checks on perturbations of W* across a range of radii.
  Rng rng(mix_seed(seed.value_or(0), 0x2d));
  int distance_bound_failures = 0;
  int spectrum_bound_failures = 0;
  const int bound_samples = 50;
  for (int i = 0; i < bound_samples; ++i) {
    FactorPair w = gt.wstar;
    Matrix e = rng.gaussian_matrix(w.n() + w.m(), w.r());
    e *= rng.uniform(0.0, 1.5) * gt.wstar.norm() / e.norm();
    w.U += e.topRows(w.n());
    w.V += e.bottomRows(w.m());
    if (!verify_surrogate_distance_bound(handle, w, gt)) ++distance_bound_failures;
    if (handle.dim() <= 400) {
      const double lambda_min = dense_min_eig(handle, w).first;
      if (lambda_min < -handle.min_curvature_bound(w) - 1e-8) ++spectrum_bound_failures;
    }
  }

  nlohmann::json report;
  report["region_audit"] = region_audit_to_json(audit);
  report["surrogate_distance_bound"] = {{"samples", bound_samples},
                                        {"failures", distance_bound_failures}};
  report["surrogate_spectrum_bound"] = {{"samples", handle.dim() <= 400 ? bound_samples : 0},
                                        {"failures", spectrum_bound_failures}};
  report["sigma_r"] = gt.sigma_r;
  report["sigma_1"] = gt.sigma_1;

  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open report file for writing: " + out_path);
    out << report.dump(2) << "\n";
  }

  const bool clean = audit.total_violations() == 0 && distance_bound_failures == 0 &&
                     spectrum_bound_failures == 0;
  return clean ? 0 : 2;
}

}  // namespace lrsaddle
