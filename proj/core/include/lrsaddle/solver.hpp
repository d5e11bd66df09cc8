#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrsaddle/meo.hpp"
#include "lrsaddle/objective.hpp"

namespace lrsaddle {

/// Strict-saddle constants. The defaults are the settings known to work
/// for the whole problem class; they can be overridden for experiments.
struct SaddleConstants {
  double c_alpha = 1.0 / 16.0;
  double c_beta = 1.0 / 260.0;
  double c_gamma = 1.0 / 6.0;
  double c_eps = 1.0 / 50.0;

  /// c_s = c_eps * min{1, (c_alpha c_beta)^{3/2}}, the large-gradient
  /// threshold coefficient.
  double c_s() const { return c_eps * std::min(1.0, std::pow(c_alpha * c_beta, 1.5)); }
};

struct SolverConfig {
  double eps_g = 1e-6;
  double eps_H = 1e-4;
  /// Upper estimate of sigma_r(X*). When unset, a power-iteration estimate
  /// of ||grad f(0)|| (the data matrix) is used, which upper-bounds
  /// sigma_r(X*) for the built-in instance kinds.
  std::optional<double> gamma0;
  double eta = 0.1;    ///< sufficient-decrease parameter, in (0,1)
  double theta = 0.5;  ///< backtracking shrink factor, in (0,1)
  std::optional<double> M;  ///< operator-norm bound for the eigenvalue oracle
  double rho_meo = 0.05;    ///< oracle failure probability
  int max_outer = 10000;
  int max_backtracks = 60;
  std::uint64_t seed = 0;
  SaddleConstants constants;

  void validate() const;
};

/// Local-phase parameters derived from the current gamma estimate.
struct SaddleParams {
  double gamma;
  double alpha;  ///< c_alpha * gamma
  double delta;  ///< sqrt(2) * gamma^{1/2}
  double beta;   ///< 2 c_beta / (delta + ||W||_F)^2
};

SaddleParams make_saddle_params(double gamma, double w_fro_norm, const SaddleConstants& c);

enum class StepKind {
  kGrad,
  kNegCurve,
  kLocalEntered,
  kLocalSkipped,
  kGammaHalved,
  kTerminated,
};

const char* to_string(StepKind kind);

/// One row of the solve trace. Step records carry the post-step state;
/// gamma_halved records mark the halving event and leave W unchanged.
struct IterationRecord {
  int k = 0;
  StepKind kind = StepKind::kGrad;
  double gamma = 0.0;
  double grad_norm = 0.0;
  double g_value = 0.0;
  double nu = 0.0;      ///< accepted step size (step records)
  int backtracks = 0;   ///< rejected trials before acceptance
  int local_iters = 0;  ///< T_k (local records)
  double surrogate = 0.0;
  double wall_ms = 0.0;  ///< measured; serialized as 0 to keep traces reproducible
};

using Trace = std::vector<IterationRecord>;

enum class Termination { kConverged, kBudgetExhausted };

const char* to_string(Termination t);

struct SolveResult {
  FactorPair w_final;
  bool converged = false;
  int outer_iters = 0;
  long total_inner_iters = 0;
  std::int64_t g_evals = 0;
  std::int64_t hvp_evals = 0;
  Termination termination_reason = Termination::kBudgetExhausted;
  double grad_norm = 0.0;
  double surrogate = 0.0;
  double g_value = 0.0;
};

struct LineSearchStep {
  double nu = 0.0;
  FactorPair w_new;
  int backtracks = 0;
  double g_new = 0.0;
};

/// Backtracking Armijo search along -grad: nu = zeta * theta^j with the
/// smallest j >= 0 such that G(W - nu grad) < G(W) - eta nu ||grad||_F^2.
/// Reuses the caller's gradient; each trial costs one objective value.
/// Throws std::invalid_argument when the gradient vanishes and
/// std::runtime_error when j exceeds max_backtracks.
LineSearchStep armijo_gradient_search(const ObjectiveHandle& h, const FactorPair& w,
                                      double g_value, const FactorPair& grad, double zeta,
                                      double theta, double eta, int max_backtracks);

/// Backtracking search along the scaled negative-curvature direction
/// D = -sgn(<S, grad>) |lambda| S, accepting the smallest j >= 0 with
/// G(W + theta^j D) < G(W) + eta (theta^{2j}/2) <D, H D>, where
/// <D, H D> = -|lambda|^3 by construction.
LineSearchStep negative_curvature_search(const ObjectiveHandle& h, const FactorPair& w,
                                         double g_value, const FactorPair& grad,
                                         const Direction& s_dir, double lambda, double theta,
                                         double eta, int max_backtracks);

/// Entry guard for the local phase:
///   alpha beta <= 1/4, ||grad G||_F <= delta/beta, and
///   2||grad f||_F + 1/2 ||hat(W)^T W||_F <= (2 L + 1/2)(2||W||_F + delta) delta.
/// All comparisons are non-strict.
bool local_entry_check(const Eval& ev, double w_fro_norm, const SaddleParams& p,
                       double lipschitz_grad);

struct LocalPhaseResult {
  FactorPair w;
  int iters = 0;  ///< T_k
  bool converged = false;
  Eval last_eval;
  int backtracks = 0;    ///< total rejected trials across the phase
  double kappa_final = 1.0;  ///< monitor state at exit
  double tau_final = 0.0;
};

/// Monitored gradient-descent loop (the local phase). Takes steps with
/// zeta = 2 beta while the kappa/tau certificates of linear convergence
/// hold; sets converged once ||grad G|| <= eps_g and the curvature
/// surrogate is <= eps_H. Exiting unconverged means a monitor failed,
/// flagging the caller's gamma estimate as too large.
LocalPhaseResult local_phase(const ObjectiveHandle& h, FactorPair w0, Eval ev0, double eps_g,
                             double eps_H, const SaddleParams& p, double eta, double theta,
                             double lipschitz_grad, int max_backtracks);

/// Observer invoked after each trace record is appended; the second
/// argument is the current iterate.
using SolveObserver = std::function<void(const IterationRecord&, const FactorPair&)>;

/// The adaptive line-search loop: steepest-descent steps while the
/// gradient is large relative to gamma_k, otherwise the randomized
/// eigenvalue oracle decides between a negative-curvature step and the
/// monitored local phase; gamma_k halves on every certificate iteration.
std::pair<SolveResult, Trace> solve(const ObjectiveHandle& h, FactorPair w0,
                                    const SolverConfig& config,
                                    const SolveObserver& observer = nullptr);

/// Power-iteration estimate of ||grad f(0)|| (deterministic in the seed),
/// the default gamma0.
double default_gamma0(const ObjectiveHandle& h, std::uint64_t seed);

}  // namespace lrsaddle
