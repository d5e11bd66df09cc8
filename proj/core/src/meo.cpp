#include "lrsaddle/meo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lrsaddle/rng.hpp"

namespace lrsaddle {

namespace {

struct LanczosState {
  Matrix basis;   // N x k orthonormal Lanczos vectors
  Vector alphas;  // diagonal of the tridiagonal
  Vector betas;   // off-diagonal (betas(i) couples i and i+1)
  int steps = 0;
};

// Lanczos with full reorthogonalization (two Gram-Schmidt passes).
// Stops at max_steps, on breakdown, or when `stop` says so.
LanczosState run_lanczos(const LinearOperator& op, const Vector& start, int max_steps,
                         const std::function<bool(const LanczosState&)>& stop) {
  const Index n = start.size();
  LanczosState st;
  st.basis.resize(n, max_steps);
  st.alphas.resize(max_steps);
  st.betas.resize(max_steps > 1 ? max_steps - 1 : 0);

  Vector q = start;
  for (int k = 0; k < max_steps; ++k) {
    st.basis.col(k) = q;
    Vector v = op(q);
    if (!v.allFinite()) {
      throw std::runtime_error("min_eig_oracle: operator returned non-finite values");
    }
    st.alphas(k) = q.dot(v);
    v -= st.alphas(k) * q;
    if (k > 0) v -= st.betas(k - 1) * st.basis.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) {
      v -= st.basis.leftCols(k + 1) * (st.basis.leftCols(k + 1).transpose() * v);
    }
    st.steps = k + 1;
    if (stop && stop(st)) break;
    if (k + 1 == max_steps) break;
    const double beta = v.norm();
    if (beta < 1e-14 * std::max(1.0, std::abs(st.alphas(k)))) break;  // invariant subspace
    st.betas(k) = beta;
    q = v / beta;
  }
  return st;
}

// Ritz values (and optionally vectors) of the current tridiagonal.
Eigen::SelfAdjointEigenSolver<Matrix> ritz_decomposition(const LanczosState& st,
                                                         bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  const Vector diag = st.alphas.head(st.steps);
  const Vector subdiag = st.betas.head(std::max(0, st.steps - 1));
  eig.computeFromTridiagonal(diag, subdiag,
                             with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  return eig;
}

}  // namespace

int lanczos_iteration_cap(Index n, double rho, double m_bound, double epsilon) {
  if (rho <= 0.0) return static_cast<int>(n);
  const double raw =
      1.0 + std::ceil(0.5 * std::log(2.75 * static_cast<double>(n) / (rho * rho)) *
                      std::sqrt(m_bound / epsilon));
  return static_cast<int>(std::min(static_cast<double>(n), raw));
}

MeoOutcome min_eig_oracle(const LinearOperator& hess_op, Index n, double epsilon,
                          std::optional<double> m_bound, double rho, std::uint64_t seed) {
  if (epsilon <= 0.0) throw std::invalid_argument("min_eig_oracle: epsilon must be positive");
  if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("min_eig_oracle: rho must be in [0, 1)");
  if (m_bound && *m_bound <= 0.0) throw std::invalid_argument("min_eig_oracle: M must be positive");

  const double m_used =
      m_bound ? *m_bound : operator_norm_estimate(hess_op, n, mix_seed(seed, 0xa1));
  const int cap = lanczos_iteration_cap(n, rho, m_used, epsilon);

#ifndef NDEBUG
  {
    // Symmetry probe: <u, H v> must equal <v, H u>. Drawn from a separate
    // stream so debug and release builds see the same Lanczos start vector.
    Rng probe_rng(mix_seed(seed, 0xd5));
    const Vector u = probe_rng.unit_vector(n);
    const Vector v = probe_rng.unit_vector(n);
    const double uv = u.dot(hess_op(v));
    const double vu = v.dot(hess_op(u));
    if (std::abs(uv - vu) > 1e-8 * std::max(1.0, std::abs(uv))) {
      throw std::invalid_argument("min_eig_oracle: operator is not symmetric");
    }
  }
#endif
  Rng rng(mix_seed(seed, 0xb2));
  const Vector start = rng.unit_vector(n);

  double prev_ritz = std::numeric_limits<double>::infinity();
  auto stable = [&prev_ritz](const LanczosState& st) {
    const double ritz = ritz_decomposition(st, false).eigenvalues()(0);
    const bool done = std::abs(ritz - prev_ritz) <= 1e-10 * std::max(1.0, std::abs(ritz));
    prev_ritz = ritz;
    return done;
  };

  const LanczosState st = run_lanczos(hess_op, start, cap, stable);

  const Eigen::SelfAdjointEigenSolver<Matrix> eig = ritz_decomposition(st, true);
  Vector s = st.basis.leftCols(st.steps) * eig.eigenvectors().col(0);
  s /= s.norm();
  const double lambda = s.dot(hess_op(s));  // recomputed Rayleigh quotient

  MeoOutcome out;
  out.epsilon = epsilon;
  out.iterations = st.steps;
  out.cap = cap;
  out.m_bound = m_used;
  if (lambda <= -0.5 * epsilon) {
    out.kind = MeoKind::kNegativeCurvature;
    out.lambda = lambda;
    out.s = std::move(s);
  } else {
    out.kind = MeoKind::kCertificate;
  }
  return out;
}

double operator_norm_estimate(const LinearOperator& hess_op, Index n, std::uint64_t seed,
                              int steps) {
  Rng rng(mix_seed(seed, 0xc3));
  const Vector start = rng.unit_vector(n);
  const int max_steps = static_cast<int>(std::min<Index>(n, std::max(1, steps)));
  const LanczosState st = run_lanczos(hess_op, start, max_steps, nullptr);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig = ritz_decomposition(st, false);
  const double low = std::abs(eig.eigenvalues()(0));
  const double high = std::abs(eig.eigenvalues()(st.steps - 1));
  return 1.1 * std::max(low, high);
}

}  // namespace lrsaddle
