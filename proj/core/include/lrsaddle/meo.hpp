#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lrsaddle/types.hpp"

namespace lrsaddle {

/// Matrix-free symmetric operator on R^N.
using LinearOperator = std::function<Vector(const Vector&)>;

enum class MeoKind {
  kNegativeCurvature,  ///< found s with s^T H s = lambda <= -epsilon/2
  kCertificate,        ///< asserts lambda_min(H) >= -epsilon, wrong w.p. <= rho
};

struct MeoOutcome {
  MeoKind kind = MeoKind::kCertificate;
  double lambda = 0.0;  ///< Rayleigh quotient of s (negative-curvature case)
  Vector s;             ///< unit vector of length N (negative-curvature case)
  double epsilon = 0.0; ///< the tolerance the call was made with

  // Run diagnostics.
  int iterations = 0;   ///< Lanczos steps used
  int cap = 0;          ///< iteration cap from the randomized-Lanczos bound
  double m_bound = 0.0; ///< operator-norm bound used for the cap
};

/// Iteration cap min{N, 1 + ceil(0.5 ln(2.75 N / rho^2) sqrt(M / epsilon))}
/// for the Lanczos method started from a random unit vector.
int lanczos_iteration_cap(Index n, double rho, double m_bound, double epsilon);

/// Randomized minimum-eigenvalue oracle. Runs Lanczos with full
/// reorthogonalization from a uniformly random unit start vector for at
/// most the cap above (or until the smallest Ritz value stabilizes to
/// 1e-10 relative change). Returns negative curvature when the recomputed
/// Rayleigh quotient is <= -epsilon/2, otherwise a probabilistic
/// certificate that lambda_min(H) >= -epsilon.
///
/// When m_bound is not provided it is estimated with operator_norm_estimate.
/// Pure given (operator, seed): the same seed gives the same outcome.
MeoOutcome min_eig_oracle(const LinearOperator& hess_op, Index n, double epsilon,
                          std::optional<double> m_bound, double rho, std::uint64_t seed);

/// Upper estimate of ||H|| for a symmetric operator: the largest Ritz value
/// magnitude after `steps` Lanczos iterations, inflated by 1.1.
double operator_norm_estimate(const LinearOperator& hess_op, Index n, std::uint64_t seed,
                              int steps = 30);

}  // namespace lrsaddle
