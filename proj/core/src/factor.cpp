#include "lrsaddle/factor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lrsaddle {

Alignment procrustes_align(const Matrix& z1, const Matrix& z2) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols()) {
    throw std::invalid_argument("procrustes_align: shape mismatch");
  }
  const Matrix cross = z2.transpose() * z1;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
  const double distance = (z1 - z2 * rotation).norm();
  return {std::move(rotation), distance};
}

FactorPair balanced_factorization(const Matrix& xstar, Index r) {
  if (r < 1 || r > std::min(xstar.rows(), xstar.cols())) {
    throw std::invalid_argument("balanced_factorization: rank out of range");
  }
  Eigen::BDCSVD<Matrix> svd(xstar, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  if (sigma(r - 1) < 1e-10) {
    throw std::domain_error("balanced_factorization: sigma_r below 1e-10, rank is degenerate");
  }
  const Vector sqrt_sigma = sigma.head(r).cwiseSqrt();
  return {svd.matrixU().leftCols(r) * sqrt_sigma.asDiagonal(),
          svd.matrixV().leftCols(r) * sqrt_sigma.asDiagonal()};
}

namespace {

// Eigenvalues of the r x r Gram matrix W^T W are the squared singular
// values of the stacked W; everything below reads off that spectrum.
Vector gram_eigenvalues(const FactorPair& w) {
  const Matrix gram =
      w.U.transpose() * w.U + w.V.transpose() * w.V;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

}  // namespace

double factor_spectral_norm(const FactorPair& w) {
  const Vector ev = gram_eigenvalues(w);
  return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

double factor_min_singular_value(const FactorPair& w) {
  const Vector ev = gram_eigenvalues(w);
  return std::sqrt(std::max(0.0, ev(0)));
}

double factor_gram_fro_norm(const FactorPair& w) {
  const Matrix gram = w.U.transpose() * w.U + w.V.transpose() * w.V;
  return gram.norm();
}

BalanceReport balance_identities_report(const FactorPair& w, const Matrix& x) {
  Eigen::BDCSVD<Matrix> svd(x);
  const Vector& sigma = svd.singularValues();
  const double x_op = sigma.size() > 0 ? sigma(0) : 0.0;
  const double w_op = factor_spectral_norm(w);
  return {std::abs(w_op * w_op - 2.0 * x_op),
          std::abs(factor_gram_fro_norm(w) - 2.0 * x.norm()),
          imbalance(w).norm()};
}

}  // namespace lrsaddle
