#pragma once

#include "lrsaddle/types.hpp"

namespace lrsaddle {

/// Result of orthogonal Procrustes alignment of Z1 against Z2.
struct Alignment {
  Matrix rotation;  ///< r x r orthogonal R minimizing ||Z1 - Z2 R||_F
  double distance;  ///< the attained minimum
};

/// Solves min_{R orthogonal} ||Z1 - Z2 R||_F in closed form via the SVD of
/// Z2^T Z1. For rank-deficient Z2^T Z1 the minimizer is not unique; one
/// SVD-consistent choice is returned and only the distance is canonical.
Alignment procrustes_align(const Matrix& z1, const Matrix& z2);

inline Alignment procrustes_align(const FactorPair& w1, const FactorPair& w2) {
  return procrustes_align(w1.stacked(), w2.stacked());
}

/// dist(Z1, Z2) = min_R ||Z1 - Z2 R||_F over orthogonal R.
inline double factor_distance(const Matrix& z1, const Matrix& z2) {
  return procrustes_align(z1, z2).distance;
}
inline double factor_distance(const FactorPair& w1, const FactorPair& w2) {
  return procrustes_align(w1, w2).distance;
}

/// Builds the balanced factorization W* = [Phi Sigma^{1/2}; Psi Sigma^{1/2}]
/// from the rank-r SVD of Xstar, so that U*(V*)^T is the best rank-r
/// approximation of Xstar and (hat W*)^T W* = 0.
///
/// Throws std::domain_error when sigma_r(Xstar) < 1e-10 (degenerate rank:
/// Sigma^{1/2} would amplify noise below that scale).
FactorPair balanced_factorization(const Matrix& xstar, Index r);

/// Residuals of the balance identities satisfied by a balanced W*:
///   |  ||W||^2 - 2 ||X||   |      (spectral norms)
///   |  ||W W^T||_F - 2 ||X||_F |
///   ||  hat(W)^T W  ||_F
/// No identity is enforced; the caller interprets the magnitudes.
struct BalanceReport {
  double op_norm_residual;
  double fro_norm_residual;
  double imbalance_norm;
};

BalanceReport balance_identities_report(const FactorPair& w, const Matrix& x);

/// Spectral norm ||W|| of the stacked factor, via the r x r Gram matrix.
double factor_spectral_norm(const FactorPair& w);

/// Smallest singular value sigma_r(W) of the stacked factor.
double factor_min_singular_value(const FactorPair& w);

/// ||W W^T||_F, computed as ||W^T W||_F on the r x r Gram matrix.
double factor_gram_fro_norm(const FactorPair& w);

}  // namespace lrsaddle
