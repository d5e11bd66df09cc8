#pragma once

#include <cstdint>
#include <random>

#include "lrsaddle/types.hpp"

namespace lrsaddle {

/// Deterministic random source. Samples are generated from the fully
/// specified mt19937_64 stream with hand-rolled transforms, so the same seed
/// yields the same bits on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return engine_(); }

  /// Integer in [0, bound) by rejection (bound must be positive).
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Standard normal via Box-Muller (no cached spare, one fresh pair per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) a(i, j) = normal();
    }
    return a;
  }

  Vector gaussian_vector(Index size) {
    Vector v(size);
    for (Index i = 0; i < size; ++i) v(i) = normal();
    return v;
  }

  /// Uniform point on the unit sphere in R^size.
  Vector unit_vector(Index size) {
    Vector v = gaussian_vector(size);
    double nrm = v.norm();
    while (nrm == 0.0) {
      v = gaussian_vector(size);
      nrm = v.norm();
    }
    return v / nrm;
  }

  /// Haar-ish random orthogonal matrix: QR of a Gaussian with the sign of
  /// R's diagonal fixed, so the result is unique given the Gaussian draw.
  Matrix orthogonal_matrix(Index size) {
    const Matrix a = gaussian_matrix(size, size);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < size; ++j) {
      if (rmat(j, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 step; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lrsaddle
