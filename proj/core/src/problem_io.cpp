#include "lrsaddle/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace lrsaddle {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* field) {
  if (!j.contains(field)) {
    throw SchemaError(std::string("missing required field \"") + field + "\"");
  }
  return j.at(field);
}

double number_field(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_number()) throw SchemaError(std::string("field \"") + field + "\" must be a number");
  return v.get<double>();
}

Index index_field(const json& j, const char* field) {
  const double v = number_field(j, field);
  if (v < 1 || v != std::floor(v)) {
    throw SchemaError(std::string("field \"") + field + "\" must be a positive integer");
  }
  return static_cast<Index>(v);
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw SchemaError(std::string("field \"") + field + "\" must be a non-empty 2-D array");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || row.size() != cols) {
      throw SchemaError(std::string("field \"") + field + "\" has ragged rows");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row.at(k).is_number()) {
        throw SchemaError(std::string("field \"") + field + "\" entries must be numbers");
      }
      out(static_cast<Index>(i), static_cast<Index>(k)) = row.at(k).get<double>();
    }
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

ProblemSpec parse_problem(const json& j) {
  ProblemSpec spec;
  const json& kind = require_field(j, "kind");
  const std::string kind_str = kind.is_string() ? kind.get<std::string>() : "";
  if (kind_str == "full") {
    spec.kind = OracleKind::kFull;
  } else if (kind_str == "completion") {
    spec.kind = OracleKind::kCompletion;
  } else if (kind_str == "sensing") {
    spec.kind = OracleKind::kSensing;
  } else {
    throw SchemaError("field \"kind\" must be one of \"completion\", \"sensing\", \"full\"");
  }
  spec.n = index_field(j, "n");
  spec.m = index_field(j, "m");
  spec.r = index_field(j, "r");

  if (j.contains("generator")) {
    const json& g = j.at("generator");
    GeneratorOptions opts;
    opts.n = spec.n;
    opts.m = spec.m;
    opts.r = spec.r;
    opts.kind = spec.kind;
    opts.seed = g.contains("seed") ? g.at("seed").get<std::uint64_t>() : 0;
    if (g.contains("condition_number")) opts.condition_number = g.at("condition_number").get<double>();
    if (g.contains("density")) opts.density = g.at("density").get<double>();
    spec.generator = opts;
    return spec;
  }

  switch (spec.kind) {
    case OracleKind::kCompletion: {
      const json& omega = require_field(j, "omega");
      if (!omega.is_array()) throw SchemaError("field \"omega\" must be an array of [i, j, value]");
      CompletionInstance inst;
      inst.n = spec.n;
      inst.m = spec.m;
      for (const json& e : omega) {
        if (!e.is_array() || e.size() != 3 || !e.at(0).is_number_integer() ||
            !e.at(1).is_number_integer() || !e.at(2).is_number()) {
          throw SchemaError("field \"omega\" entries must be [i, j, value] triples");
        }
        inst.omega.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>()});
      }
      spec.omega = std::move(inst);
      break;
    }
    case OracleKind::kSensing: {
      const json& meas = require_field(j, "measurements");
      SensingInstance inst;
      inst.n = spec.n;
      inst.m = spec.m;
      const json& as = require_field(meas, "A");
      if (!as.is_array() || as.empty()) throw SchemaError("field \"measurements.A\" must be a non-empty array");
      for (const json& a : as) inst.measurements.push_back(matrix_from_json(a, "measurements.A"));
      const json& y = require_field(meas, "y");
      if (!y.is_array() || y.size() != as.size()) {
        throw SchemaError("field \"measurements.y\" must match the length of \"measurements.A\"");
      }
      inst.observations.resize(static_cast<Index>(y.size()));
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (!y.at(i).is_number()) throw SchemaError("field \"measurements.y\" entries must be numbers");
        inst.observations(static_cast<Index>(i)) = y.at(i).get<double>();
      }
      spec.sensing = std::move(inst);
      break;
    }
    case OracleKind::kFull:
      spec.dense = matrix_from_json(require_field(j, "dense"), "dense");
      if (spec.dense->rows() != spec.n || spec.dense->cols() != spec.m) {
        throw SchemaError("field \"dense\" dimensions disagree with \"n\" x \"m\"");
      }
      break;
  }
  return spec;
}

json problem_to_json(const ProblemSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["r"] = spec.r;
  if (spec.generator) {
    j["generator"] = {{"seed", spec.generator->seed},
                      {"condition_number", spec.generator->condition_number},
                      {"density", spec.generator->density}};
  }
  if (spec.omega) {
    json omega = json::array();
    for (const ObservedEntry& e : spec.omega->omega) omega.push_back({e.i, e.j, e.value});
    j["omega"] = std::move(omega);
  }
  if (spec.sensing) {
    json as = json::array();
    for (const Matrix& a : spec.sensing->measurements) as.push_back(matrix_to_json(a));
    json y = json::array();
    for (Index i = 0; i < spec.sensing->observations.size(); ++i) y.push_back(spec.sensing->observations(i));
    j["measurements"] = {{"A", std::move(as)}, {"y", std::move(y)}};
  }
  if (spec.dense) j["dense"] = matrix_to_json(*spec.dense);
  return j;
}

ProblemSpec load_problem(const std::string& path) { return parse_problem(load_json_file(path)); }

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem out;
  out.r = spec.r;
  if (spec.generator) {
    SyntheticProblem synth = synthetic_instance(*spec.generator);
    out.oracle = std::move(synth.oracle);
    out.ground_truth = GroundTruth::from(std::move(synth.xstar), spec.r);
    return out;
  }
  switch (spec.kind) {
    case OracleKind::kCompletion:
      if (!spec.omega) throw SchemaError("missing required field \"omega\"");
      out.oracle = completion_oracle(*spec.omega);
      break;
    case OracleKind::kSensing:
      if (!spec.sensing) throw SchemaError("missing required field \"measurements\"");
      out.oracle = sensing_oracle(*spec.sensing);
      break;
    case OracleKind::kFull:
      if (!spec.dense) throw SchemaError("missing required field \"dense\"");
      out.oracle = full_observation_oracle(*spec.dense);
      out.ground_truth = GroundTruth::from(*spec.dense, spec.r);
      break;
  }
  return out;
}

SolverConfig parse_config(const json& j) {
  SolverConfig cfg;
  if (j.contains("eps_g")) cfg.eps_g = j.at("eps_g").get<double>();
  if (j.contains("eps_H")) cfg.eps_H = j.at("eps_H").get<double>();
  if (j.contains("gamma0")) cfg.gamma0 = j.at("gamma0").get<double>();
  if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
  if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
  if (j.contains("M")) cfg.M = j.at("M").get<double>();
  if (j.contains("rho_meo")) cfg.rho_meo = j.at("rho_meo").get<double>();
  if (j.contains("max_outer")) cfg.max_outer = j.at("max_outer").get<int>();
  if (j.contains("max_backtracks")) cfg.max_backtracks = j.at("max_backtracks").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    if (c.contains("c_alpha")) cfg.constants.c_alpha = c.at("c_alpha").get<double>();
    if (c.contains("c_beta")) cfg.constants.c_beta = c.at("c_beta").get<double>();
    if (c.contains("c_gamma")) cfg.constants.c_gamma = c.at("c_gamma").get<double>();
    if (c.contains("c_eps")) cfg.constants.c_eps = c.at("c_eps").get<double>();
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const SolverConfig& cfg) {
  json j;
  j["eps_g"] = cfg.eps_g;
  j["eps_H"] = cfg.eps_H;
  if (cfg.gamma0) j["gamma0"] = *cfg.gamma0;
  j["eta"] = cfg.eta;
  j["theta"] = cfg.theta;
  if (cfg.M) j["M"] = *cfg.M;
  j["rho_meo"] = cfg.rho_meo;
  j["max_outer"] = cfg.max_outer;
  j["max_backtracks"] = cfg.max_backtracks;
  j["seed"] = cfg.seed;
  j["constants"] = {{"c_alpha", cfg.constants.c_alpha},
                    {"c_beta", cfg.constants.c_beta},
                    {"c_gamma", cfg.constants.c_gamma},
                    {"c_eps", cfg.constants.c_eps}};
  return j;
}

SolverConfig load_config(const std::string& path) { return parse_config(load_json_file(path)); }

BudgetInputs parse_budget_inputs(const json& j) {
  BudgetInputs in;
  in.g_w0 = number_field(j, "G_W0");
  in.g_low = number_field(j, "G_low");
  in.l_g = number_field(j, "L_g");
  in.l_h = number_field(j, "L_H");
  in.sigma_r = number_field(j, "sigma_r");
  in.gamma0 = number_field(j, "gamma0");
  in.eps_g = number_field(j, "eps_g");
  in.eps_H = number_field(j, "eps_H");
  in.r_level = number_field(j, "R_L");
  in.lipschitz_grad = number_field(j, "L_grad_f");
  in.rho = number_field(j, "rho");
  in.n_dim = index_field(j, "N");
  in.m_bound = number_field(j, "M");
  if (j.contains("eta")) in.eta = j.at("eta").get<double>();
  if (j.contains("theta")) in.theta = j.at("theta").get<double>();
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    if (c.contains("c_alpha")) in.constants.c_alpha = c.at("c_alpha").get<double>();
    if (c.contains("c_beta")) in.constants.c_beta = c.at("c_beta").get<double>();
    if (c.contains("c_gamma")) in.constants.c_gamma = c.at("c_gamma").get<double>();
    if (c.contains("c_eps")) in.constants.c_eps = c.at("c_eps").get<double>();
  }
  return in;
}

json budget_report_to_json(const BudgetReport& rep) {
  json j;
  j["nu_min"] = rep.nu_min;
  j["C_hat"] = rep.c_hat;
  j["c_grad"] = rep.c_grad;
  j["c_nc"] = rep.c_nc;
  j["c_local"] = rep.c_local;
  j["T_cap"] = rep.t_cap;
  j["K_large"] = rep.k_large;
  j["K_local"] = rep.k_local;
  j["K_outer"] = rep.k_outer;
  j["K_total"] = rep.k_total;
  j["C_meo"] = rep.c_meo;
  j["N_meo_cap"] = rep.n_meo_cap;
  j["inputs"] = {{"G_W0", rep.inputs.g_w0},
                 {"G_low", rep.inputs.g_low},
                 {"L_g", rep.inputs.l_g},
                 {"L_H", rep.inputs.l_h},
                 {"sigma_r", rep.inputs.sigma_r},
                 {"gamma0", rep.inputs.gamma0},
                 {"eps_g", rep.inputs.eps_g},
                 {"eps_H", rep.inputs.eps_H},
                 {"R_L", rep.inputs.r_level},
                 {"L_grad_f", rep.inputs.lipschitz_grad},
                 {"rho", rep.inputs.rho},
                 {"N", rep.inputs.n_dim},
                 {"M", rep.inputs.m_bound},
                 {"eta", rep.inputs.eta},
                 {"theta", rep.inputs.theta}};
  return j;
}

json result_to_json(const SolveResult& res) {
  json j;
  j["converged"] = res.converged;
  j["outer_iters"] = res.outer_iters;
  j["total_inner_iters"] = res.total_inner_iters;
  j["g_evals"] = res.g_evals;
  j["hvp_evals"] = res.hvp_evals;
  j["termination_reason"] = to_string(res.termination_reason);
  j["grad_norm"] = res.grad_norm;
  j["surrogate"] = res.surrogate;
  j["G_value"] = res.g_value;
  j["W_final"] = {{"U", matrix_to_json(res.w_final.U)}, {"V", matrix_to_json(res.w_final.V)}};
  return j;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "k,step_kind,gamma_k,grad_norm,G_value,nu,backtracks,T_k,surrogate,wall_ms\n";
  char buf[512];
  for (const IterationRecord& rec : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,0\n", rec.k,
                  to_string(rec.kind), rec.gamma, rec.grad_norm, rec.g_value, rec.nu,
                  rec.backtracks, rec.local_iters, rec.surrogate);
    os << buf;
  }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  write_trace_csv(out, trace);
}

json region_audit_to_json(const RegionAuditReport& report) {
  json regions = json::array();
  for (const RegionCheckStats& r : report.regions) {
    regions.push_back({{"region", r.region},
                       {"requested", r.requested},
                       {"sampled", r.sampled},
                       {"violations", r.violations},
                       {"sampling_exhausted", r.sampling_exhausted}});
  }
  return {{"regions", std::move(regions)}, {"total_violations", report.total_violations()}};
}

}  // namespace lrsaddle
