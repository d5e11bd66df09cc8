#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "lrsaddle/oracle.hpp"
#include "lrsaddle/types.hpp"

namespace lrsaddle {

/// Everything the solver needs at one iterate, from a single gradient
/// computation: the regularized value, the gradient, and the cheap
/// monitor quantities built from grad f(X) and the factor imbalance.
struct Eval {
  double g_value = 0.0;
  FactorPair grad;
  double grad_norm = 0.0;
  double f_grad_norm = 0.0;     ///< ||grad f(X)||_F
  double imbalance_norm = 0.0;  ///< ||hat(W)^T W||_F

  /// The Hessian-floor surrogate 2||grad f||_F + 1/2 ||hat(W)^T W||_F;
  /// lambda_min(grad^2 G) >= -surrogate under restricted strong convexity.
  double surrogate() const { return 2.0 * f_grad_norm + 0.5 * imbalance_norm; }
};

/// The regularized objective G(W) = f(U V^T) + 1/8 ||U^T U - V^T V||_F^2
/// with its gradient and matrix-free Hessian. Evaluations are pure;
/// the g/hvp counters are atomic so concurrent probing stays safe.
class ObjectiveHandle {
 public:
  ObjectiveHandle(std::shared_ptr<const ProblemOracle> oracle, Index r)
      : oracle_(std::move(oracle)), r_(r) {
    if (!oracle_) throw std::invalid_argument("ObjectiveHandle: null oracle");
    if (r_ < 1) throw std::invalid_argument("ObjectiveHandle: rank must be positive");
  }

  Index n() const { return oracle_->rows(); }
  Index m() const { return oracle_->cols(); }
  Index r() const { return r_; }
  Index dim() const { return (n() + m()) * r_; }
  const ProblemOracle& oracle() const { return *oracle_; }
  double lipschitz_grad() const { return oracle_->lipschitz_grad(); }

  /// G(W). Does not touch the counters (line-search trials are value-only).
  double value(const FactorPair& w) const;

  /// grad G(W) = [grad f(X) V; grad f(X)^T U] + 1/2 hat(W) hat(W)^T W.
  /// Increments g_evals once.
  FactorPair gradient(const FactorPair& w) const;

  /// Value, gradient, and monitor quantities in one pass (one g_eval).
  Eval evaluate(const FactorPair& w) const;

  /// The Hessian bilinear form [grad^2 G(W)](D, D).
  double hess_bilinear(const FactorPair& w, const Direction& d) const;

  /// The Hessian action H(W)[D], the linear map whose quadratic form is
  /// hess_bilinear. Increments hvp_evals once.
  Direction hess_apply(const FactorPair& w, const Direction& d) const;

  /// 2||grad f(X)||_F + 1/2 ||hat(W)^T W||_F, recomputed from W.
  double min_curvature_bound(const FactorPair& w) const;

  std::int64_t g_evals() const { return g_evals_.load(std::memory_order_relaxed); }
  std::int64_t hvp_evals() const { return hvp_evals_.load(std::memory_order_relaxed); }

 private:
  void check_shape(const FactorPair& w) const;
  void check_shape(const Direction& d) const;

  std::shared_ptr<const ProblemOracle> oracle_;
  Index r_;
  mutable std::atomic<std::int64_t> g_evals_{0};
  mutable std::atomic<std::int64_t> hvp_evals_{0};
};

}  // namespace lrsaddle
