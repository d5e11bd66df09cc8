#include "lrsaddle/meo.hpp"

#include <gtest/gtest.h>

#include "lrsaddle/rng.hpp"

namespace lrsaddle {
namespace {

LinearOperator diag_operator(Vector d) {
  return [d = std::move(d)](const Vector& v) -> Vector { return d.cwiseProduct(v); };
}

TEST(LanczosCap, MatchesClosedForm) {
  // 1 + ceil(0.5 ln(2.75 * 100 / 0.01) sqrt(10)) = 18.
  EXPECT_EQ(lanczos_iteration_cap(100, 0.1, 10.0, 1.0), 18);
  EXPECT_EQ(lanczos_iteration_cap(5, 0.1, 10.0, 1.0), 5);  // capped at N
}

TEST(MinEigOracle, CertifiesPositiveDefinite) {
  const Vector d = Vector::Ones(50);
  const MeoOutcome out = min_eig_oracle(diag_operator(d), 50, 0.1, 2.0, 0.05, 7);
  EXPECT_EQ(out.kind, MeoKind::kCertificate);
  EXPECT_DOUBLE_EQ(out.epsilon, 0.1);
  EXPECT_LE(out.iterations, out.cap);
}

TEST(MinEigOracle, FindsPlantedNegativeDirection) {
  Vector d = Vector::Ones(50);
  d(0) = -1.0;
  const LinearOperator op = diag_operator(d);
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MeoOutcome out = min_eig_oracle(op, 50, 1.0, 1.0, 0.05, seed);
    if (out.kind != MeoKind::kNegativeCurvature) continue;
    if (out.lambda <= -0.5 && std::abs(out.s(0)) >= 0.99) ++successes;
    // The returned pair must be internally consistent.
    EXPECT_NEAR(out.s.norm(), 1.0, 1e-10);
    const double rayleigh = out.s.dot(op(out.s));
    EXPECT_NEAR(rayleigh, out.lambda, 1e-8 * std::max(1.0, std::abs(out.lambda)));
  }
  EXPECT_GE(successes, 190);  // >= 95% over 200 seeds
}

TEST(MinEigOracle, NegativeCurvatureContract) {
  Rng rng(71);
  // Random symmetric operator with a known negative eigenvalue.
  const int n = 30;
  Matrix a = rng.gaussian_matrix(n, n);
  Matrix sym = 0.5 * (a + a.transpose());
  sym += (1.5 + std::abs(sym.norm())) * Matrix::Identity(n, n);  // push positive
  sym(0, 0) = -5.0;                                              // then plant a pit
  const Matrix symm = 0.5 * (sym + sym.transpose());
  const LinearOperator op = [&symm](const Vector& v) -> Vector { return symm * v; };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MeoOutcome out = min_eig_oracle(op, n, 1.0, std::nullopt, 0.05, seed);
    if (out.kind == MeoKind::kNegativeCurvature) {
      EXPECT_LE(out.lambda, -0.5);
      EXPECT_NEAR(out.s.dot(op(out.s)), out.lambda, 1e-8 * std::max(1.0, std::abs(out.lambda)));
    }
    EXPECT_LE(out.iterations, out.cap);
  }
}

TEST(MinEigOracle, CertificateSoundnessRate) {
  // lambda_min = -1.1 < -eps = -1: certifying is a failure.
  Vector d = Vector::Ones(40);
  d(0) = -1.1;
  const LinearOperator op = diag_operator(d);
  int false_certificates = 0;
  const int trials = 500;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const MeoOutcome out = min_eig_oracle(op, 40, 1.0, 1.1, 0.05, seed);
    if (out.kind == MeoKind::kCertificate) ++false_certificates;
    EXPECT_LE(out.iterations, out.cap);
  }
  EXPECT_LE(static_cast<double>(false_certificates) / trials, 0.05 + 0.02);
}

TEST(MinEigOracle, DeterministicInSeed) {
  Rng rng(72);
  Matrix a = rng.gaussian_matrix(25, 25);
  const Matrix symm = 0.5 * (a + a.transpose());
  const LinearOperator op = [&symm](const Vector& v) -> Vector { return symm * v; };
  const MeoOutcome x = min_eig_oracle(op, 25, 0.3, std::nullopt, 0.05, 1234);
  const MeoOutcome y = min_eig_oracle(op, 25, 0.3, std::nullopt, 0.05, 1234);
  EXPECT_EQ(x.kind, y.kind);
  EXPECT_EQ(x.iterations, y.iterations);
  if (x.kind == MeoKind::kNegativeCurvature) {
    EXPECT_EQ(x.lambda, y.lambda);
    EXPECT_EQ((x.s - y.s).norm(), 0.0);
  }
}

TEST(MinEigOracle, RejectsBadArguments) {
  const LinearOperator op = diag_operator(Vector::Ones(4));
  EXPECT_THROW(min_eig_oracle(op, 4, -1.0, std::nullopt, 0.05, 0), std::invalid_argument);
  EXPECT_THROW(min_eig_oracle(op, 4, 1.0, -2.0, 0.05, 0), std::invalid_argument);
  EXPECT_THROW(min_eig_oracle(op, 4, 1.0, std::nullopt, 1.0, 0), std::invalid_argument);

  const LinearOperator bad = [](const Vector& v) -> Vector {
    return Vector::Constant(v.size(), std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(min_eig_oracle(bad, 4, 1.0, 1.0, 0.05, 0), std::runtime_error);
}

TEST(OperatorNormEstimate, KnownNorms) {
  const LinearOperator scaled_identity = [](const Vector& v) -> Vector { return 3.0 * v; };
  const double m3 = operator_norm_estimate(scaled_identity, 20, 5);
  EXPECT_GE(m3, 3.0);
  EXPECT_LE(m3, 3.3 + 1e-12);

  Vector d(10);
  for (int i = 0; i < 10; ++i) d(i) = i + 1.0;
  const double m10 = operator_norm_estimate(diag_operator(d), 10, 5, 30);
  EXPECT_GE(m10, 10.0);
  EXPECT_LE(m10, 11.0 + 1e-9);
}

TEST(OperatorNormEstimate, ScaleEquivariant) {
  Rng rng(73);
  Matrix a = rng.gaussian_matrix(15, 15);
  const Matrix symm = 0.5 * (a + a.transpose());
  const LinearOperator op = [&symm](const Vector& v) -> Vector { return symm * v; };
  const LinearOperator op2 = [&symm](const Vector& v) -> Vector { return 2.0 * (symm * v); };
  const double m1 = operator_norm_estimate(op, 15, 9);
  const double m2 = operator_norm_estimate(op2, 15, 9);
  EXPECT_NEAR(m2, 2.0 * m1, 1e-6 * m2);
}

}  // namespace
}  // namespace lrsaddle
