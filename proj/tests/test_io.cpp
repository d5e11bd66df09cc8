#include "lrsaddle/problem_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lrsaddle/experiment.hpp"
#include "lrsaddle/rng.hpp"
#include "test_util.hpp"

namespace lrsaddle {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("lrsaddle_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ProblemIo, GeneratorRoundTrip) {
  ProblemSpec spec;
  spec.kind = OracleKind::kFull;
  spec.n = 8;
  spec.m = 7;
  spec.r = 2;
  GeneratorOptions gen;
  gen.n = 8;
  gen.m = 7;
  gen.r = 2;
  gen.seed = 5;
  gen.condition_number = 2.0;
  spec.generator = gen;

  const nlohmann::json j = problem_to_json(spec);
  const ProblemSpec back = parse_problem(j);
  EXPECT_EQ(back.kind, OracleKind::kFull);
  EXPECT_EQ(back.n, 8);
  ASSERT_TRUE(back.generator.has_value());
  EXPECT_EQ(back.generator->seed, 5u);

  const BuiltProblem built = build_problem(back);
  ASSERT_TRUE(built.ground_truth.has_value());
  EXPECT_NEAR(built.ground_truth->sigma_r, 1.0, 1e-9);
  EXPECT_NEAR(built.ground_truth->sigma_1, 2.0, 1e-9);
}

TEST(ProblemIo, ExplicitDataRoundTrips) {
  Rng rng(201);
  // completion
  ProblemSpec comp;
  comp.kind = OracleKind::kCompletion;
  comp.n = 3;
  comp.m = 3;
  comp.r = 1;
  CompletionInstance inst;
  inst.n = 3;
  inst.m = 3;
  inst.omega = {{0, 0, 1.5}, {2, 1, -0.25}};
  comp.omega = inst;
  const ProblemSpec comp_back = parse_problem(problem_to_json(comp));
  ASSERT_TRUE(comp_back.omega.has_value());
  EXPECT_EQ(comp_back.omega->omega.size(), 2u);
  EXPECT_DOUBLE_EQ(comp_back.omega->omega[1].value, -0.25);

  // sensing
  ProblemSpec sens;
  sens.kind = OracleKind::kSensing;
  sens.n = 2;
  sens.m = 2;
  sens.r = 1;
  SensingInstance si;
  si.n = 2;
  si.m = 2;
  si.measurements = {rng.gaussian_matrix(2, 2), rng.gaussian_matrix(2, 2)};
  si.observations = rng.gaussian_vector(2);
  sens.sensing = si;
  const ProblemSpec sens_back = parse_problem(problem_to_json(sens));
  ASSERT_TRUE(sens_back.sensing.has_value());
  EXPECT_EQ((sens_back.sensing->measurements[0] - si.measurements[0]).norm(), 0.0);

  // full
  ProblemSpec full;
  full.kind = OracleKind::kFull;
  full.n = 2;
  full.m = 3;
  full.r = 1;
  full.dense = rng.gaussian_matrix(2, 3);
  const ProblemSpec full_back = parse_problem(problem_to_json(full));
  ASSERT_TRUE(full_back.dense.has_value());
  EXPECT_EQ((*full_back.dense - *full.dense).norm(), 0.0);
}

TEST(ProblemIo, MissingKindNamesTheField) {
  try {
    parse_problem(nlohmann::json{{"n", 3}, {"m", 3}, {"r", 1}});
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("kind"), std::string::npos);
  }
}

TEST(ProblemIo, SchemaViolationsAreNamed) {
  nlohmann::json j{{"kind", "completion"}, {"n", 3}, {"m", 3}, {"r", 1}};
  try {
    parse_problem(j);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("omega"), std::string::npos);
  }

  j["omega"] = nlohmann::json::array({nlohmann::json::array({0, 0})});  // not a triple
  EXPECT_THROW(parse_problem(j), SchemaError);

  nlohmann::json full{{"kind", "full"}, {"n", 2}, {"m", 2}, {"r", 1}};
  full["dense"] = nlohmann::json::array({nlohmann::json::array({1.0, 2.0, 3.0})});
  EXPECT_THROW(parse_problem(full), SchemaError);
}

TEST(ConfigIo, RoundTripAndValidation) {
  SolverConfig cfg;
  cfg.eps_g = 1e-7;
  cfg.gamma0 = 3.5;
  cfg.seed = 42;
  cfg.constants.c_beta = 1.0;
  const SolverConfig back = parse_config(config_to_json(cfg));
  EXPECT_DOUBLE_EQ(back.eps_g, 1e-7);
  ASSERT_TRUE(back.gamma0.has_value());
  EXPECT_DOUBLE_EQ(*back.gamma0, 3.5);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_DOUBLE_EQ(back.constants.c_beta, 1.0);

  EXPECT_THROW(parse_config(nlohmann::json{{"eps_g", 2.0}}), std::invalid_argument);
}

TEST(TraceCsv, FixedHeaderAndDeterministicBytes) {
  Trace trace;
  IterationRecord rec;
  rec.k = 0;
  rec.kind = StepKind::kGrad;
  rec.gamma = 2.0;
  rec.grad_norm = 0.125;
  rec.g_value = 1.5;
  rec.nu = 0.5;
  rec.backtracks = 1;
  rec.surrogate = 0.25;
  rec.wall_ms = 123.4;  // measured time must not leak into the bytes
  trace.push_back(rec);

  std::ostringstream a, b;
  write_trace_csv(a, trace);
  trace[0].wall_ms = 999.9;
  write_trace_csv(b, trace);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "k,step_kind,gamma_k,grad_norm,G_value,nu,backtracks,T_k,surrogate,wall_ms");
  EXPECT_NE(a.str().find("grad"), std::string::npos);
}

TEST(Experiment, SolveRunWritesDeterministicArtifacts) {
  TempDir tmp;
  ProblemSpec spec;
  spec.kind = OracleKind::kFull;
  spec.n = 12;
  spec.m = 12;
  spec.r = 2;
  GeneratorOptions gen;
  gen.n = 12;
  gen.m = 12;
  gen.r = 2;
  gen.seed = 7;
  gen.condition_number = 2.0;
  spec.generator = gen;
  {
    std::ofstream out(tmp.path("p.json"));
    out << problem_to_json(spec).dump(2);
  }
  {
    std::ofstream out(tmp.path("c.json"));
    out << config_to_json(SolverConfig{}).dump(2);
  }

  RunOptions run;
  run.problem_path = tmp.path("p.json");
  run.config_path = tmp.path("c.json");
  run.trace_path = tmp.path("t1.csv");
  run.out_path = tmp.path("r1.json");
  run.seed = 42;
  const int code1 = run_solve_experiment(run);
  run.trace_path = tmp.path("t2.csv");
  run.out_path = tmp.path("r2.json");
  const int code2 = run_solve_experiment(run);

  EXPECT_EQ(code1, 0);
  EXPECT_EQ(code2, 0);
  EXPECT_EQ(slurp(tmp.path("t1.csv")), slurp(tmp.path("t2.csv")));
  EXPECT_EQ(slurp(tmp.path("r1.json")), slurp(tmp.path("r2.json")));

  const nlohmann::json result = nlohmann::json::parse(slurp(tmp.path("r1.json")));
  EXPECT_TRUE(result.at("converged").get<bool>());
  EXPECT_LE(result.at("grad_norm").get<double>(), 1e-6);
  EXPECT_EQ(result.at("termination_reason").get<std::string>(), "converged");
}

TEST(Experiment, MissingFieldYieldsSchemaError) {
  TempDir tmp;
  {
    std::ofstream out(tmp.path("bad.json"));
    out << "{\"n\": 3, \"m\": 3, \"r\": 1}";
  }
  RunOptions run;
  run.problem_path = tmp.path("bad.json");
  try {
    run_solve_experiment(run);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("kind"), std::string::npos);
  }
}

TEST(Experiment, ParallelRunsMatchSerialRuns) {
  // Oracles and handles are safe to evaluate concurrently; two threads
  // solving distinct handles over the same oracle agree with serial runs.
  GeneratorOptions gen;
  gen.n = 10;
  gen.m = 10;
  gen.r = 2;
  gen.seed = 11;
  gen.condition_number = 2.0;
  const SyntheticProblem prob = synthetic_instance(gen);

  SolverConfig cfg;
  cfg.seed = 3;
  Rng rng(3);
  const FactorPair w0 = testing::random_factor(rng, 10, 10, 2, 0.5);

  ObjectiveHandle serial_handle(prob.oracle, 2);
  const auto [serial, serial_trace] = solve(serial_handle, w0, cfg);

  SolveResult a, b;
  std::thread ta([&] {
    ObjectiveHandle h(prob.oracle, 2);
    a = solve(h, w0, cfg).first;
  });
  std::thread tb([&] {
    ObjectiveHandle h(prob.oracle, 2);
    b = solve(h, w0, cfg).first;
  });
  ta.join();
  tb.join();
  EXPECT_EQ((a.w_final.U - serial.w_final.U).norm(), 0.0);
  EXPECT_EQ((b.w_final.U - serial.w_final.U).norm(), 0.0);
  EXPECT_EQ(a.g_evals, serial.g_evals);
}

TEST(Experiment, BudgetExhaustionExitCode) {
  TempDir tmp;
  ProblemSpec spec;
  spec.kind = OracleKind::kFull;
  spec.n = 10;
  spec.m = 10;
  spec.r = 2;
  GeneratorOptions gen;
  gen.n = 10;
  gen.m = 10;
  gen.r = 2;
  gen.seed = 3;
  spec.generator = gen;
  {
    std::ofstream out(tmp.path("p.json"));
    out << problem_to_json(spec).dump(2);
  }
  SolverConfig cfg;
  cfg.max_outer = 2;
  cfg.eps_g = 1e-12;
  cfg.eps_H = 1e-12;
  {
    std::ofstream out(tmp.path("c.json"));
    out << config_to_json(cfg).dump(2);
  }
  RunOptions run;
  run.problem_path = tmp.path("p.json");
  run.config_path = tmp.path("c.json");
  run.out_path = tmp.path("r.json");
  EXPECT_EQ(run_solve_experiment(run), 2);
  const nlohmann::json result = nlohmann::json::parse(slurp(tmp.path("r.json")));
  EXPECT_EQ(result.at("termination_reason").get<std::string>(), "budget_exhausted");
}

TEST(Experiment, DiagnoseReportsCleanInstance) {
  TempDir tmp;
  ProblemSpec spec;
  spec.kind = OracleKind::kFull;
  spec.n = 9;
  spec.m = 8;
  spec.r = 2;
  GeneratorOptions gen;
  gen.n = 9;
  gen.m = 8;
  gen.r = 2;
  gen.seed = 5;
  gen.condition_number = 2.0;
  spec.generator = gen;
  {
    std::ofstream out(tmp.path("p.json"));
    out << problem_to_json(spec).dump(2);
  }
  const int code = run_diagnose(tmp.path("p.json"), tmp.path("report.json"), 20, 5);
  EXPECT_EQ(code, 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(tmp.path("report.json")));
  EXPECT_EQ(report.at("region_audit").at("total_violations").get<int>(), 0);
  EXPECT_EQ(report.at("surrogate_distance_bound").at("failures").get<int>(), 0);
  EXPECT_EQ(report.at("surrogate_spectrum_bound").at("failures").get<int>(), 0);
}

#ifdef LRSADDLE_CLI_PATH
TEST(Cli, SubcommandsSmoke) {
  TempDir tmp;
  const std::string cli = LRSADDLE_CLI_PATH;
  auto sh = [](const std::string& cmd) { return std::system(cmd.c_str()); };

  // gen -> solve -> diagnose round trip through the binary.
  const std::string p = tmp.path("p.json");
  ASSERT_EQ(sh(cli + " gen --kind full --n 10 --m 10 --r 2 --condition 2 --seed 1 --out " + p), 0);
  EXPECT_EQ(sh(cli + " solve --problem " + p + " --trace " + tmp.path("t.csv") + " --out " +
               tmp.path("r.json") + " --seed 7"),
            0);
  EXPECT_EQ(sh(cli + " diagnose --problem " + p + " --samples 10 --seed 2 --out " +
               tmp.path("d.json")),
            0);

  {
    std::ofstream out(tmp.path("b.json"));
    out << R"({"G_W0": 10.0, "G_low": 0.0, "L_g": 10.0, "L_H": 5.0, "sigma_r": 1.0,
               "gamma0": 8.0, "eps_g": 1e-6, "eps_H": 1e-4, "R_L": 5.0, "L_grad_f": 1.0,
               "rho": 0.05, "N": 120, "M": 10.0})";
  }
  EXPECT_EQ(sh(cli + " budgets --config " + tmp.path("b.json") + " --out " + tmp.path("bb.json")), 0);
  const nlohmann::json budget = nlohmann::json::parse(slurp(tmp.path("bb.json")));
  EXPECT_DOUBLE_EQ(budget.at("K_local").get<double>(), 4.0);

  // Schema errors surface as exit code 1 with the field named on stderr.
  {
    std::ofstream out(tmp.path("bad.json"));
    out << "{\"n\": 3, \"m\": 3, \"r\": 1}";
  }
  const int bad = sh(cli + " solve --problem " + tmp.path("bad.json") + " 2> " + tmp.path("err.txt"));
  EXPECT_NE(bad, 0);
  EXPECT_NE(slurp(tmp.path("err.txt")).find("kind"), std::string::npos);

  // SADDLE_LOG=1 produces a summary line on stderr without changing artifacts.
  ASSERT_EQ(sh("SADDLE_LOG=1 " + cli + " solve --problem " + p + " --trace " + tmp.path("t2.csv") +
               " --seed 7 2> " + tmp.path("log.txt")),
            0);
  EXPECT_NE(slurp(tmp.path("log.txt")).find("converged"), std::string::npos);
  EXPECT_EQ(slurp(tmp.path("t.csv")), slurp(tmp.path("t2.csv")));
}
#endif

TEST(BudgetIo, ParseAndSerialize) {
  nlohmann::json j{{"G_W0", 10.0}, {"G_low", 0.0},   {"L_g", 10.0},  {"L_H", 5.0},
                   {"sigma_r", 1.0}, {"gamma0", 8.0}, {"eps_g", 1e-6}, {"eps_H", 1e-4},
                   {"R_L", 5.0},     {"L_grad_f", 1.0}, {"rho", 0.05},  {"N", 120},
                   {"M", 10.0}};
  const BudgetInputs in = parse_budget_inputs(j);
  const BudgetReport rep = theoretical_budgets(in);
  const nlohmann::json out = budget_report_to_json(rep);
  EXPECT_DOUBLE_EQ(out.at("K_local").get<double>(), 4.0);
  EXPECT_DOUBLE_EQ(out.at("K_outer").get<double>(),
                   out.at("K_large").get<double>() + out.at("K_local").get<double>());
  EXPECT_EQ(out.at("inputs").at("N").get<int>(), 120);

  nlohmann::json missing = j;
  missing.erase("sigma_r");
  try {
    parse_budget_inputs(missing);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma_r"), std::string::npos);
  }
}

}  // namespace
}  // namespace lrsaddle
