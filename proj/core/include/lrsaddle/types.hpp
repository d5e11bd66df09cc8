#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace lrsaddle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// The solver's decision variable: the stacked factor matrix W = [U; V]
/// with U in R^{n x r} and V in R^{m x r}, representing X = U V^T.
struct FactorPair {
  Matrix U;
  Matrix V;

  FactorPair() = default;
  FactorPair(Matrix u, Matrix v) : U(std::move(u)), V(std::move(v)) {
    if (U.cols() != V.cols()) {
      throw std::invalid_argument("FactorPair: U and V must have the same number of columns");
    }
  }

  Index n() const { return U.rows(); }
  Index m() const { return V.rows(); }
  Index r() const { return U.cols(); }

  /// The (n+m) x r stacked matrix [U; V].
  Matrix stacked() const {
    Matrix w(U.rows() + V.rows(), U.cols());
    w.topRows(U.rows()) = U;
    w.bottomRows(V.rows()) = V;
    return w;
  }

  /// X = U V^T.
  Matrix product() const { return U * V.transpose(); }

  double squared_norm() const { return U.squaredNorm() + V.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  FactorPair& operator+=(const FactorPair& o) {
    U += o.U;
    V += o.V;
    return *this;
  }
  FactorPair& operator-=(const FactorPair& o) {
    U -= o.U;
    V -= o.V;
    return *this;
  }
  FactorPair& operator*=(double a) {
    U *= a;
    V *= a;
    return *this;
  }

  friend FactorPair operator*(double a, const FactorPair& w) { return {a * w.U, a * w.V}; }
  friend FactorPair operator+(FactorPair a, const FactorPair& b) { return a += b; }
  friend FactorPair operator-(FactorPair a, const FactorPair& b) { return a -= b; }
};

/// The hat companion: hat([U; V]) = [U; -V].
inline FactorPair hat(const FactorPair& w) { return {w.U, -w.V}; }

/// The factor-imbalance matrix \hat{W}^T W = U^T U - V^T V (r x r, symmetric).
inline Matrix imbalance(const FactorPair& w) {
  return w.U.transpose() * w.U - w.V.transpose() * w.V;
}

inline double dot(const FactorPair& a, const FactorPair& b) {
  return a.U.cwiseProduct(b.U).sum() + a.V.cwiseProduct(b.V).sum();
}

/// A direction in factor space, D = [S; Y], the Hessian's probe argument.
struct Direction {
  Matrix S;
  Matrix Y;

  Direction() = default;
  Direction(Matrix s, Matrix y) : S(std::move(s)), Y(std::move(y)) {
    if (S.cols() != Y.cols()) {
      throw std::invalid_argument("Direction: S and Y must have the same number of columns");
    }
  }

  Matrix stacked() const {
    Matrix d(S.rows() + Y.rows(), S.cols());
    d.topRows(S.rows()) = S;
    d.bottomRows(Y.rows()) = Y;
    return d;
  }

  double squared_norm() const { return S.squaredNorm() + Y.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  Direction& operator*=(double a) {
    S *= a;
    Y *= a;
    return *this;
  }
  friend Direction operator*(double a, const Direction& d) { return {a * d.S, a * d.Y}; }
  friend Direction operator+(const Direction& a, const Direction& b) {
    return {a.S + b.S, a.Y + b.Y};
  }
};

inline Direction hat(const Direction& d) { return {d.S, -d.Y}; }

inline double dot(const Direction& a, const Direction& b) {
  return a.S.cwiseProduct(b.S).sum() + a.Y.cwiseProduct(b.Y).sum();
}

inline Direction as_direction(const FactorPair& w) { return {w.U, w.V}; }
inline FactorPair as_factor_pair(const Direction& d) { return {d.S, d.Y}; }

/// Column-major flattening of the stacked (n+m) x r matrix; the unrolled
/// Hessian and the eigenvalue oracle operate on vectors in this layout.
inline Vector flatten(const Direction& d, Index n, Index m) {
  Vector v((n + m) * d.S.cols());
  const Index r = d.S.cols();
  for (Index j = 0; j < r; ++j) {
    v.segment(j * (n + m), n) = d.S.col(j);
    v.segment(j * (n + m) + n, m) = d.Y.col(j);
  }
  return v;
}

inline Direction unflatten(const Vector& v, Index n, Index m, Index r) {
  if (v.size() != (n + m) * r) {
    throw std::invalid_argument("unflatten: vector length does not match (n+m)*r");
  }
  Direction d{Matrix(n, r), Matrix(m, r)};
  for (Index j = 0; j < r; ++j) {
    d.S.col(j) = v.segment(j * (n + m), n);
    d.Y.col(j) = v.segment(j * (n + m) + n, m);
  }
  return d;
}

}  // namespace lrsaddle
