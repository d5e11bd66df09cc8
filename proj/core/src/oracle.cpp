#include "lrsaddle/oracle.hpp"

#include <algorithm>
#include <set>

#include "lrsaddle/rng.hpp"

namespace lrsaddle {

namespace {

class FullObservationOracle final : public ProblemOracle {
 public:
  explicit FullObservationOracle(Matrix m) : m_(std::move(m)) {}

  double value(const Matrix& x) const override { return 0.5 * (x - m_).squaredNorm(); }
  Matrix grad(const Matrix& x) const override { return x - m_; }
  Matrix hess_apply(const Matrix& /*x*/, const Matrix& t) const override { return t; }
  double lipschitz_grad() const override { return 1.0; }
  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }

 private:
  Matrix m_;
};

class CompletionOracle final : public ProblemOracle {
 public:
  explicit CompletionOracle(CompletionInstance inst) : inst_(std::move(inst)) {
    std::set<std::pair<Index, Index>> seen;
    for (const ObservedEntry& e : inst_.omega) {
      if (e.i < 0 || e.i >= inst_.n || e.j < 0 || e.j >= inst_.m) {
        throw std::invalid_argument("completion_oracle: observed index out of range");
      }
      if (!seen.emplace(e.i, e.j).second) {
        throw std::invalid_argument("completion_oracle: duplicate observed index");
      }
    }
  }

  double value(const Matrix& x) const override {
    double acc = 0.0;
    for (const ObservedEntry& e : inst_.omega) {
      const double d = x(e.i, e.j) - e.value;
      acc += d * d;
    }
    return 0.5 * acc;
  }

  Matrix grad(const Matrix& x) const override {
    Matrix g = Matrix::Zero(inst_.n, inst_.m);
    for (const ObservedEntry& e : inst_.omega) g(e.i, e.j) = x(e.i, e.j) - e.value;
    return g;
  }

  Matrix hess_apply(const Matrix& /*x*/, const Matrix& t) const override {
    Matrix h = Matrix::Zero(inst_.n, inst_.m);
    for (const ObservedEntry& e : inst_.omega) h(e.i, e.j) = t(e.i, e.j);
    return h;
  }

  double lipschitz_grad() const override { return 1.0; }
  Index rows() const override { return inst_.n; }
  Index cols() const override { return inst_.m; }

 private:
  CompletionInstance inst_;
};

class SensingOracle final : public ProblemOracle {
 public:
  explicit SensingOracle(SensingInstance inst) : inst_(std::move(inst)) {
    if (inst_.measurements.empty()) {
      throw std::invalid_argument("sensing_oracle: need at least one measurement");
    }
    if (static_cast<Index>(inst_.measurements.size()) != inst_.observations.size()) {
      throw std::invalid_argument("sensing_oracle: measurement/observation count mismatch");
    }
    lipschitz_ = 0.0;
    for (const Matrix& a : inst_.measurements) {
      if (a.rows() != inst_.n || a.cols() != inst_.m) {
        throw std::invalid_argument("sensing_oracle: measurement dimension mismatch");
      }
      lipschitz_ += a.squaredNorm();
    }
  }

  double value(const Matrix& x) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst_.measurements.size(); ++i) {
      const double d = inst_.measurements[i].cwiseProduct(x).sum() - inst_.observations(static_cast<Index>(i));
      acc += d * d;
    }
    return 0.5 * acc;
  }

  Matrix grad(const Matrix& x) const override {
    Matrix g = Matrix::Zero(inst_.n, inst_.m);
    for (std::size_t i = 0; i < inst_.measurements.size(); ++i) {
      const double d = inst_.measurements[i].cwiseProduct(x).sum() - inst_.observations(static_cast<Index>(i));
      g += d * inst_.measurements[i];
    }
    return g;
  }

  Matrix hess_apply(const Matrix& /*x*/, const Matrix& t) const override {
    Matrix h = Matrix::Zero(inst_.n, inst_.m);
    for (const Matrix& a : inst_.measurements) h += a.cwiseProduct(t).sum() * a;
    return h;
  }

  double lipschitz_grad() const override { return lipschitz_; }
  Index rows() const override { return inst_.n; }
  Index cols() const override { return inst_.m; }

 private:
  SensingInstance inst_;
  double lipschitz_ = 0.0;
};

}  // namespace

std::shared_ptr<ProblemOracle> completion_oracle(CompletionInstance instance) {
  return std::make_shared<CompletionOracle>(std::move(instance));
}

std::shared_ptr<ProblemOracle> sensing_oracle(SensingInstance instance) {
  return std::make_shared<SensingOracle>(std::move(instance));
}

std::shared_ptr<ProblemOracle> full_observation_oracle(Matrix m) {
  return std::make_shared<FullObservationOracle>(std::move(m));
}

const char* to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kFull: return "full";
    case OracleKind::kCompletion: return "completion";
    case OracleKind::kSensing: return "sensing";
  }
  return "unknown";
}

SyntheticProblem synthetic_instance(const GeneratorOptions& opts) {
  if (opts.n < 1 || opts.m < 1 || opts.r < 1 || opts.r > std::min(opts.n, opts.m)) {
    throw std::invalid_argument("synthetic_instance: invalid dimensions");
  }
  if (opts.condition_number < 1.0) {
    throw std::invalid_argument("synthetic_instance: condition_number must be >= 1");
  }
  Rng rng(mix_seed(opts.seed, 0x5f));

  // sigma_r = 1, sigma_1 = condition_number, geometric in between.
  Vector sigma(opts.r);
  for (Index i = 0; i < opts.r; ++i) {
    const double frac = opts.r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(opts.r - 1);
    sigma(i) = std::pow(opts.condition_number, 1.0 - frac);
  }

  const Matrix phi = rng.orthogonal_matrix(opts.n).leftCols(opts.r);
  const Matrix psi = rng.orthogonal_matrix(opts.m).leftCols(opts.r);
  Matrix xstar = phi * sigma.asDiagonal() * psi.transpose();

  SyntheticProblem problem;
  problem.wstar = balanced_factorization(xstar, opts.r);
  problem.xstar = std::move(xstar);

  switch (opts.kind) {
    case OracleKind::kFull:
      problem.oracle = full_observation_oracle(problem.xstar);
      break;
    case OracleKind::kCompletion: {
      CompletionInstance inst;
      inst.n = opts.n;
      inst.m = opts.m;
      for (Index i = 0; i < opts.n; ++i) {
        for (Index j = 0; j < opts.m; ++j) {
          if (rng.uniform() < opts.density) inst.omega.push_back({i, j, problem.xstar(i, j)});
        }
      }
      if (inst.omega.empty()) inst.omega.push_back({0, 0, problem.xstar(0, 0)});
      problem.oracle = completion_oracle(std::move(inst));
      break;
    }
    case OracleKind::kSensing: {
      SensingInstance inst;
      inst.n = opts.n;
      inst.m = opts.m;
      const auto p = std::max<Index>(1, static_cast<Index>(opts.density * static_cast<double>(opts.n * opts.m)));
      inst.measurements.reserve(static_cast<std::size_t>(p));
      inst.observations.resize(p);
      const double scale = 1.0 / std::sqrt(static_cast<double>(p));
      for (Index i = 0; i < p; ++i) {
        inst.measurements.push_back(scale * rng.gaussian_matrix(opts.n, opts.m));
        inst.observations(i) = inst.measurements.back().cwiseProduct(problem.xstar).sum();
      }
      problem.oracle = sensing_oracle(std::move(inst));
      break;
    }
  }
  return problem;
}

}  // namespace lrsaddle
