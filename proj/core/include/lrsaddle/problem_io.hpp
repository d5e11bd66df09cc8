#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "lrsaddle/diagnostics.hpp"
#include "lrsaddle/oracle.hpp"
#include "lrsaddle/solver.hpp"

namespace lrsaddle {

/// Schema error with a message naming the offending field.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed problem file: either explicit data or a generator block.
struct ProblemSpec {
  OracleKind kind = OracleKind::kFull;
  Index n = 0;
  Index m = 0;
  Index r = 0;

  std::optional<CompletionInstance> omega;
  std::optional<SensingInstance> sensing;
  std::optional<Matrix> dense;
  std::optional<GeneratorOptions> generator;
};

/// A problem ready to solve. Ground truth is present for generated
/// instances and for explicit full-observation data (truncated SVD).
struct BuiltProblem {
  std::shared_ptr<ProblemOracle> oracle;
  Index r = 0;
  std::optional<GroundTruth> ground_truth;
};

ProblemSpec parse_problem(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemSpec& spec);
ProblemSpec load_problem(const std::string& path);

BuiltProblem build_problem(const ProblemSpec& spec);

SolverConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const SolverConfig& config);
SolverConfig load_config(const std::string& path);

BudgetInputs parse_budget_inputs(const nlohmann::json& j);
nlohmann::json budget_report_to_json(const BudgetReport& report);

nlohmann::json result_to_json(const SolveResult& result);

/// Trace CSV with the fixed column set
/// k,step_kind,gamma_k,grad_norm,G_value,nu,backtracks,T_k,surrogate,wall_ms.
/// wall_ms is written as 0 so identical runs produce identical bytes;
/// measured timings stay in the in-memory trace.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);

nlohmann::json region_audit_to_json(const RegionAuditReport& report);

}  // namespace lrsaddle
