#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lrsaddle/factor.hpp"
#include "lrsaddle/types.hpp"

namespace lrsaddle {

/// A concrete instance of the data-fit term f(X): value, gradient, the
/// action of the Hessian, and the known Lipschitz constant of the gradient.
/// Oracles are immutable after construction; concurrent read-only
/// evaluation from multiple threads is safe.
class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  virtual double value(const Matrix& x) const = 0;
  virtual Matrix grad(const Matrix& x) const = 0;
  /// Returns H_X[T], the matrix with <T', H_X[T]> = [grad^2 f(X)](T', T).
  virtual Matrix hess_apply(const Matrix& x, const Matrix& t) const = 0;
  virtual double lipschitz_grad() const = 0;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
};

struct ObservedEntry {
  Index i;
  Index j;
  double value;
};

/// Matrix completion data: observed entries M_ij for (i,j) in Omega.
struct CompletionInstance {
  Index n = 0;
  Index m = 0;
  std::vector<ObservedEntry> omega;
};

/// Matrix sensing data: measurement matrices A_1..A_p and observations y.
struct SensingInstance {
  Index n = 0;
  Index m = 0;
  std::vector<Matrix> measurements;
  Vector observations;
};

/// f(X) = 1/2 sum_{(i,j) in Omega} (X_ij - M_ij)^2, L_{grad f} = 1.
/// Validates index ranges and rejects duplicate indices.
std::shared_ptr<ProblemOracle> completion_oracle(CompletionInstance instance);

/// f(X) = 1/2 ||A(X) - y||^2 with A(X)_i = <A_i, X>, L_{grad f} = sum ||A_i||_F^2.
std::shared_ptr<ProblemOracle> sensing_oracle(SensingInstance instance);

/// f(X) = 1/2 ||X - M||_F^2, L_{grad f} = 1. Every direction sees unit
/// curvature, so the restricted strong convexity bounds hold with a = b.
std::shared_ptr<ProblemOracle> full_observation_oracle(Matrix m);

enum class OracleKind { kFull, kCompletion, kSensing };

const char* to_string(OracleKind kind);

/// A generated instance together with its ground truth.
struct SyntheticProblem {
  std::shared_ptr<ProblemOracle> oracle;
  Matrix xstar;      ///< the planted rank-r critical point
  FactorPair wstar;  ///< balanced_factorization(xstar, r)
};

struct GeneratorOptions {
  Index n = 20;
  Index m = 20;
  Index r = 3;
  double condition_number = 1.0;  ///< sigma_1 / sigma_r, with sigma_r = 1
  std::uint64_t seed = 0;
  OracleKind kind = OracleKind::kFull;
  double density = 0.5;  ///< completion: sampling density; sensing: p = density * n * m
};

/// Plants X* with a prescribed geometric spectrum via random orthogonal
/// factors and builds an oracle whose critical point is X*. Deterministic
/// in the seed. Note the data-fit assumptions are only verified for the
/// full-observation kind; completion/sensing instances are best-effort.
SyntheticProblem synthetic_instance(const GeneratorOptions& opts);

}  // namespace lrsaddle
