// lrsaddle: adaptive line-search solver for factored low-rank matrix
// problems, with ground-truth diagnostics and worst-case budget reports.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lrsaddle/experiment.hpp"
#include "lrsaddle/problem_io.hpp"

namespace {

int cmd_gen(const std::string& out_path, const std::string& kind, long n, long m, long r,
            double condition, double density, std::uint64_t seed) {
  lrsaddle::ProblemSpec spec;
  if (kind == "full") {
    spec.kind = lrsaddle::OracleKind::kFull;
  } else if (kind == "completion") {
    spec.kind = lrsaddle::OracleKind::kCompletion;
  } else if (kind == "sensing") {
    spec.kind = lrsaddle::OracleKind::kSensing;
  } else {
    throw lrsaddle::SchemaError("field \"kind\" must be one of \"completion\", \"sensing\", \"full\"");
  }
  spec.n = n;
  spec.m = m;
  spec.r = r;
  lrsaddle::GeneratorOptions opts;
  opts.n = n;
  opts.m = m;
  opts.r = r;
  opts.kind = spec.kind;
  opts.condition_number = condition;
  opts.density = density;
  opts.seed = seed;
  spec.generator = opts;

  // Validate that the instance actually builds before writing it out.
  lrsaddle::build_problem(spec);

  const nlohmann::json j = lrsaddle::problem_to_json(spec);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_budgets(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw lrsaddle::SchemaError("cannot open file: " + config_path);
  nlohmann::json j;
  in >> j;
  const lrsaddle::BudgetReport report =
      lrsaddle::theoretical_budgets(lrsaddle::parse_budget_inputs(j));
  const nlohmann::json out_json = lrsaddle::budget_report_to_json(report);
  if (out_path.empty()) {
    std::cout << out_json.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << out_json.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive line-search solver for factored low-rank matrix problems"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run the solver on a problem file");
  lrsaddle::RunOptions run;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;
  solve_cmd->add_option("--problem", run.problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--config", run.config_path, "solver config JSON file");
  solve_cmd->add_option("--trace", run.trace_path, "write the iteration trace CSV here");
  solve_cmd->add_option("--out", run.out_path, "write the result JSON here");
  solve_cmd->add_option("--seed", seed_flag, "override the config seed")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  // diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "region and curvature-bound diagnostics (needs ground truth)");
  std::string diag_problem, diag_out;
  int diag_samples = 100;
  std::uint64_t diag_seed = 0;
  diag_cmd->add_option("--problem", diag_problem, "problem JSON file")->required();
  diag_cmd->add_option("--out", diag_out, "write the report JSON here (default stdout)");
  diag_cmd->add_option("--samples", diag_samples, "samples per region");
  diag_cmd->add_option("--seed", diag_seed, "sampling seed");

  // budgets
  auto* budget_cmd = app.add_subcommand("budgets", "evaluate the worst-case iteration budgets");
  std::string budget_config, budget_out;
  budget_cmd->add_option("--config", budget_config, "budget inputs JSON file")->required();
  budget_cmd->add_option("--out", budget_out, "write the report JSON here (default stdout)");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic problem file");
  std::string gen_out, gen_kind = "full";
  long gen_n = 20, gen_m = 20, gen_r = 3;
  double gen_condition = 1.0, gen_density = 0.5;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--out", gen_out, "output problem JSON (default stdout)");
  gen_cmd->add_option("--kind", gen_kind, "full | completion | sensing");
  gen_cmd->add_option("--n", gen_n, "rows");
  gen_cmd->add_option("--m", gen_m, "columns");
  gen_cmd->add_option("--r", gen_r, "rank");
  gen_cmd->add_option("--condition", gen_condition, "sigma_1 / sigma_r of the planted solution");
  gen_cmd->add_option("--density", gen_density, "observation density / measurement ratio");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      if (seed_given) run.seed = seed_flag;
      return lrsaddle::run_solve_experiment(run);
    }
    if (*diag_cmd) return lrsaddle::run_diagnose(diag_problem, diag_out, diag_samples, diag_seed);
    if (*budget_cmd) return cmd_budgets(budget_config, budget_out);
    if (*gen_cmd) {
      return cmd_gen(gen_out, gen_kind, gen_n, gen_m, gen_r, gen_condition, gen_density, gen_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
