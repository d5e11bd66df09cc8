#include "lrsaddle/solver.hpp"

#include <chrono>
#include <cmath>

#include "lrsaddle/rng.hpp"

namespace lrsaddle {

void SolverConfig::validate() const {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_unit(eps_g)) throw std::invalid_argument("config: eps_g must be in (0, 1)");
  if (!in_unit(eps_H)) throw std::invalid_argument("config: eps_H must be in (0, 1)");
  if (gamma0 && *gamma0 <= 0.0) throw std::invalid_argument("config: gamma0 must be positive");
  if (!in_unit(eta)) throw std::invalid_argument("config: eta must be in (0, 1)");
  if (!in_unit(theta)) throw std::invalid_argument("config: theta must be in (0, 1)");
  if (M && *M <= 0.0) throw std::invalid_argument("config: M must be positive");
  if (rho_meo < 0.0 || rho_meo >= 1.0) throw std::invalid_argument("config: rho_meo must be in [0, 1)");
  if (max_outer < 1) throw std::invalid_argument("config: max_outer must be positive");
  if (max_backtracks < 1) throw std::invalid_argument("config: max_backtracks must be positive");
  if (constants.c_alpha <= 0 || constants.c_beta <= 0 || constants.c_gamma <= 0 ||
      constants.c_eps <= 0) {
    throw std::invalid_argument("config: strict-saddle constants must be positive");
  }
}

SaddleParams make_saddle_params(double gamma, double w_fro_norm, const SaddleConstants& c) {
  SaddleParams p;
  p.gamma = gamma;
  p.alpha = c.c_alpha * gamma;
  p.delta = std::sqrt(2.0) * std::sqrt(gamma);
  const double denom = p.delta + w_fro_norm;
  p.beta = 2.0 * c.c_beta / (denom * denom);
  return p;
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kGrad: return "grad";
    case StepKind::kNegCurve: return "negcurve";
    case StepKind::kLocalEntered: return "local_entered";
    case StepKind::kLocalSkipped: return "local_skipped";
    case StepKind::kGammaHalved: return "gamma_halved";
    case StepKind::kTerminated: return "terminated";
  }
  return "unknown";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

LineSearchStep armijo_gradient_search(const ObjectiveHandle& h, const FactorPair& w,
                                      double g_value, const FactorPair& grad, double zeta,
                                      double theta, double eta, int max_backtracks) {
  const double grad_sq = grad.squared_norm();
  if (grad_sq == 0.0) {
    throw std::invalid_argument("armijo_gradient_search: gradient is zero");
  }
  if (zeta <= 0.0) throw std::invalid_argument("armijo_gradient_search: zeta must be positive");

  double nu = zeta;
  for (int j = 0; j <= max_backtracks; ++j, nu *= theta) {
    FactorPair trial{w.U - nu * grad.U, w.V - nu * grad.V};
    const double g_trial = h.value(trial);
    if (g_trial < g_value - eta * nu * grad_sq) {
      return {nu, std::move(trial), j, g_trial};
    }
  }
  throw std::runtime_error(
      "armijo_gradient_search: no acceptable step within max_backtracks "
      "(gradient and objective are inconsistent)");
}

LineSearchStep negative_curvature_search(const ObjectiveHandle& h, const FactorPair& w,
                                         double g_value, const FactorPair& grad,
                                         const Direction& s_dir, double lambda, double theta,
                                         double eta, int max_backtracks) {
  if (lambda >= 0.0) {
    throw std::invalid_argument("negative_curvature_search: lambda must be negative");
  }
  // D = -sgn(<S, grad G>) |lambda| S, so <D, H D> = -|lambda|^3. sgn(0) := +1.
  const double alignment = s_dir.S.cwiseProduct(grad.U).sum() + s_dir.Y.cwiseProduct(grad.V).sum();
  const double sign = alignment >= 0.0 ? 1.0 : -1.0;
  const double scale = -sign * std::abs(lambda);
  const Direction d{scale * s_dir.S, scale * s_dir.Y};
  const double model_curvature = -std::pow(std::abs(lambda), 3.0);  // <D, H D>

  double nu = 1.0;
  for (int j = 0; j <= max_backtracks; ++j, nu *= theta) {
    FactorPair trial{w.U + nu * d.S, w.V + nu * d.Y};
    const double g_trial = h.value(trial);
    if (g_trial < g_value + eta * 0.5 * nu * nu * model_curvature) {
      return {nu, std::move(trial), j, g_trial};
    }
  }
  throw std::runtime_error("negative_curvature_search: no acceptable step within max_backtracks");
}

bool local_entry_check(const Eval& ev, double w_fro_norm, const SaddleParams& p,
                       double lipschitz_grad) {
  if (!(p.alpha * p.beta <= 0.25)) return false;
  if (!(ev.grad_norm <= p.delta / p.beta)) return false;
  const double tau0 = (2.0 * lipschitz_grad + 0.5) * (2.0 * w_fro_norm + p.delta) * p.delta;
  return ev.surrogate() <= tau0;
}

LocalPhaseResult local_phase(const ObjectiveHandle& h, FactorPair w0, Eval ev0, double eps_g,
                             double eps_H, const SaddleParams& p, double eta, double theta,
                             double lipschitz_grad, int max_backtracks) {
  if (p.alpha <= 0.0 || p.beta <= 0.0 || p.delta <= 0.0) {
    throw std::invalid_argument("local_phase: parameters must be positive");
  }
  LocalPhaseResult res;
  res.w = std::move(w0);
  res.last_eval = std::move(ev0);

  double kappa = 1.0;
  double tau = (2.0 * lipschitz_grad + 0.5) * (2.0 * res.w.norm() + p.delta) * p.delta;

  // Entering at an approximate second-order point already: no step can (or
  // needs to) make strict progress.
  if (res.last_eval.grad_norm <= eps_g && res.last_eval.surrogate() <= eps_H) {
    res.converged = true;
    res.tau_final = tau;
    return res;
  }

  while (res.last_eval.grad_norm <= std::sqrt(kappa) / p.beta * p.delta &&
         res.last_eval.surrogate() <= tau) {
    // Stationary in the gradient but the surrogate tolerance is unmet:
    // gradient steps cannot make progress, so flag gamma as too large.
    if (res.last_eval.grad_norm == 0.0) break;
    const LineSearchStep step =
        armijo_gradient_search(h, res.w, res.last_eval.g_value, res.last_eval.grad,
                               2.0 * p.beta, theta, eta, max_backtracks);
    res.w = step.w_new;
    res.backtracks += step.backtracks;
    kappa *= (1.0 - 2.0 * step.nu * p.alpha);
    const double sqrt_kappa_delta = std::sqrt(std::max(kappa, 0.0)) * p.delta;
    tau = (2.0 * lipschitz_grad + 0.5) * (2.0 * res.w.norm() + sqrt_kappa_delta) * sqrt_kappa_delta;
    res.last_eval = h.evaluate(res.w);
    res.iters += 1;
    if (res.last_eval.grad_norm <= eps_g && res.last_eval.surrogate() <= eps_H) {
      res.converged = true;
      break;
    }
  }
  res.kappa_final = kappa;
  res.tau_final = tau;
  return res;
}

double default_gamma0(const ObjectiveHandle& h, std::uint64_t seed) {
  // Power iteration on the data matrix -grad f(0) = M (or A^T y for sensing).
  const Matrix data = -h.oracle().grad(Matrix::Zero(h.n(), h.m()));
  Rng rng(mix_seed(seed, 0xd4));
  Vector v = rng.unit_vector(h.m());
  double sigma = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vector u = data * v;
    const double nu = u.norm();
    if (nu == 0.0) break;
    u /= nu;
    v = data.transpose() * u;
    const double next = v.norm();
    if (next == 0.0) break;
    v /= next;
    if (std::abs(next - sigma) <= 1e-12 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  if (sigma <= 0.0) return 1.0;  // degenerate data: any positive guess is valid
  return sigma;
}

namespace {

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void check_finite(const Eval& ev) {
  if (!std::isfinite(ev.g_value) || !std::isfinite(ev.grad_norm)) {
    throw std::runtime_error("solve: objective or gradient became non-finite");
  }
}

}  // namespace

std::pair<SolveResult, Trace> solve(const ObjectiveHandle& h, FactorPair w0,
                                    const SolverConfig& config, const SolveObserver& observer) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const SaddleConstants& cs = config.constants;
  const double c_s = cs.c_s();
  const double lip = h.lipschitz_grad();

  double gamma = config.gamma0 ? *config.gamma0 : default_gamma0(h, config.seed);

  Trace trace;
  SolveResult res;
  res.w_final = std::move(w0);
  Eval ev = h.evaluate(res.w_final);
  check_finite(ev);

  auto record = [&](int k, StepKind kind, double nu, int backtracks, int local_iters) {
    IterationRecord rec;
    rec.k = k;
    rec.kind = kind;
    rec.gamma = gamma;
    rec.grad_norm = ev.grad_norm;
    rec.g_value = ev.g_value;
    rec.nu = nu;
    rec.backtracks = backtracks;
    rec.local_iters = local_iters;
    rec.surrogate = ev.surrogate();
    rec.wall_ms = elapsed_ms(t0);
    trace.push_back(rec);
    if (observer) observer(trace.back(), res.w_final);
  };

  auto finish = [&](Termination reason) {
    res.converged = reason == Termination::kConverged;
    res.termination_reason = reason;
    res.g_evals = h.g_evals();
    res.hvp_evals = h.hvp_evals();
    res.grad_norm = ev.grad_norm;
    res.surrogate = ev.surrogate();
    res.g_value = ev.g_value;
    return std::make_pair(std::move(res), std::move(trace));
  };

  for (int k = 0; k < config.max_outer; ++k) {
    res.outer_iters = k + 1;
    if (ev.grad_norm >= c_s * std::pow(gamma, 1.5)) {
      // Large gradient: steepest descent with backtracking from zeta = 1.
      const LineSearchStep step = armijo_gradient_search(h, res.w_final, ev.g_value, ev.grad,
                                                         1.0, config.theta, config.eta,
                                                         config.max_backtracks);
      res.w_final = step.w_new;
      ev = h.evaluate(res.w_final);
      check_finite(ev);
      record(k, StepKind::kGrad, step.nu, step.backtracks, 0);
      continue;
    }

    // Seek a direction of large negative curvature.
    const Index n = h.n(), m = h.m(), r = h.r();
    LinearOperator hess_op = [&](const Vector& v) {
      return flatten(h.hess_apply(res.w_final, unflatten(v, n, m, r)), n, m);
    };
    const MeoOutcome meo = min_eig_oracle(hess_op, h.dim(), cs.c_gamma * gamma, config.M,
                                          config.rho_meo, mix_seed(config.seed, 0xee00 + static_cast<std::uint64_t>(k)));

    if (meo.kind == MeoKind::kNegativeCurvature) {
      const Direction s_dir = unflatten(meo.s, n, m, r);
      const LineSearchStep step =
          negative_curvature_search(h, res.w_final, ev.g_value, ev.grad, s_dir, meo.lambda,
                                    config.theta, config.eta, config.max_backtracks);
      res.w_final = step.w_new;
      ev = h.evaluate(res.w_final);
      check_finite(ev);
      record(k, StepKind::kNegCurve, step.nu, step.backtracks, 0);
      continue;
    }

    // Certificate: lambda_min >= -c_gamma gamma_k w.h.p. Try the local phase.
    const SaddleParams params = make_saddle_params(gamma, res.w_final.norm(), cs);
    if (local_entry_check(ev, res.w_final.norm(), params, lip)) {
      LocalPhaseResult lp = local_phase(h, res.w_final, ev, config.eps_g, config.eps_H, params,
                                        config.eta, config.theta, lip, config.max_backtracks);
      res.w_final = std::move(lp.w);
      ev = lp.last_eval;
      check_finite(ev);
      res.total_inner_iters += lp.iters;
      record(k, StepKind::kLocalEntered, 0.0, lp.backtracks, lp.iters);
      if (lp.converged) {
        record(k, StepKind::kTerminated, 0.0, 0, lp.iters);
        return finish(Termination::kConverged);
      }
    } else {
      record(k, StepKind::kLocalSkipped, 0.0, 0, 0);
    }
    gamma *= 0.5;
    record(k, StepKind::kGammaHalved, 0.0, 0, 0);
  }

  return finish(Termination::kBudgetExhausted);
}

}  // namespace lrsaddle
