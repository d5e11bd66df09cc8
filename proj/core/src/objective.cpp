#include "lrsaddle/objective.hpp"

namespace lrsaddle {

void ObjectiveHandle::check_shape(const FactorPair& w) const {
  if (w.n() != n() || w.m() != m() || w.r() != r_) {
    throw std::invalid_argument("ObjectiveHandle: factor shape mismatch");
  }
}

void ObjectiveHandle::check_shape(const Direction& d) const {
  if (d.S.rows() != n() || d.Y.rows() != m() || d.S.cols() != r_ || d.Y.cols() != r_) {
    throw std::invalid_argument("ObjectiveHandle: direction shape mismatch");
  }
}

double ObjectiveHandle::value(const FactorPair& w) const {
  check_shape(w);
  return oracle_->value(w.product()) + 0.125 * imbalance(w).squaredNorm();
}

FactorPair ObjectiveHandle::gradient(const FactorPair& w) const {
  check_shape(w);
  const Matrix fg = oracle_->grad(w.product());
  const Matrix t = imbalance(w);
  g_evals_.fetch_add(1, std::memory_order_relaxed);
  return {fg * w.V + 0.5 * w.U * t, fg.transpose() * w.U - 0.5 * w.V * t};
}

Eval ObjectiveHandle::evaluate(const FactorPair& w) const {
  check_shape(w);
  const Matrix x = w.product();
  const Matrix fg = oracle_->grad(x);
  const Matrix t = imbalance(w);
  g_evals_.fetch_add(1, std::memory_order_relaxed);

  Eval ev;
  ev.g_value = oracle_->value(x) + 0.125 * t.squaredNorm();
  ev.grad = {fg * w.V + 0.5 * w.U * t, fg.transpose() * w.U - 0.5 * w.V * t};
  ev.grad_norm = ev.grad.norm();
  ev.f_grad_norm = fg.norm();
  ev.imbalance_norm = t.norm();
  return ev;
}

double ObjectiveHandle::hess_bilinear(const FactorPair& w, const Direction& d) const {
  check_shape(w);
  check_shape(d);
  const Matrix x = w.product();
  const Matrix delta = d.S * w.V.transpose() + w.U * d.Y.transpose();
  const Matrix fg = oracle_->grad(x);
  const Matrix hf = oracle_->hess_apply(x, delta);

  const Matrix what_w = imbalance(w);                                  // hat(W)^T W
  const Matrix dhat_d = d.S.transpose() * d.S - d.Y.transpose() * d.Y; // hat(D)^T D
  const Matrix what_d = w.U.transpose() * d.S - w.V.transpose() * d.Y; // hat(W)^T D
  const Matrix sym = what_d + what_d.transpose();                      // hat(W)^T D + D^T hat(W)

  return delta.cwiseProduct(hf).sum() + 2.0 * fg.cwiseProduct(d.S * d.Y.transpose()).sum() +
         0.5 * what_w.cwiseProduct(dhat_d).sum() + 0.25 * sym.squaredNorm();
}

Direction ObjectiveHandle::hess_apply(const FactorPair& w, const Direction& d) const {
  check_shape(w);
  check_shape(d);
  const Matrix x = w.product();
  const Matrix delta = d.S * w.V.transpose() + w.U * d.Y.transpose();
  const Matrix fg = oracle_->grad(x);
  const Matrix hf = oracle_->hess_apply(x, delta);
  hvp_evals_.fetch_add(1, std::memory_order_relaxed);

  // Differentiating grad G at W along D: the regularizer contributes
  // 1/2 (hat(D) hat(W)^T W + hat(W) (hat(D)^T W + hat(W)^T D)).
  const Matrix t = imbalance(w);
  const Matrix dt = (d.S.transpose() * w.U - d.Y.transpose() * w.V) +
                    (w.U.transpose() * d.S - w.V.transpose() * d.Y);

  return {hf * w.V + fg * d.Y + 0.5 * (d.S * t + w.U * dt),
          hf.transpose() * w.U + fg.transpose() * d.S - 0.5 * (d.Y * t + w.V * dt)};
}

double ObjectiveHandle::min_curvature_bound(const FactorPair& w) const {
  check_shape(w);
  return 2.0 * oracle_->grad(w.product()).norm() + 0.5 * imbalance(w).norm();
}

}  // namespace lrsaddle
