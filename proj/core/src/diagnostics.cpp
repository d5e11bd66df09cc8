#include "lrsaddle/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "lrsaddle/factor.hpp"
#include "lrsaddle/rng.hpp"

namespace lrsaddle {

GroundTruth GroundTruth::from(Matrix xstar, Index r) {
  GroundTruth gt;
  gt.wstar = balanced_factorization(xstar, r);
  Eigen::BDCSVD<Matrix> svd(xstar);
  gt.sigma_1 = svd.singularValues()(0);
  gt.sigma_r = svd.singularValues()(r - 1);
  gt.xstar_fro = xstar.norm();
  gt.xstar = std::move(xstar);
  return gt;
}

RegionLabel classify_region(const FactorPair& w, const GroundTruth& gt) {
  const double dist = factor_distance(w, gt.wstar);
  const double sqrt_sr = std::sqrt(gt.sigma_r);
  const double w_op = factor_spectral_norm(w);
  const double w_min_sv = factor_min_singular_value(w);
  const double wwt_fro = factor_gram_fro_norm(w);
  const double star_op = factor_spectral_norm(gt.wstar);
  const double star_wwt_fro = factor_gram_fro_norm(gt.wstar);

  RegionLabel lbl;
  lbl.r1 = dist <= sqrt_sr;
  lbl.r2 = w_min_sv <= std::sqrt(0.5) * sqrt_sr && wwt_fro <= (20.0 / 19.0) * star_wwt_fro;
  lbl.r3_prime = dist > sqrt_sr && w_op <= (20.0 / 19.0) * star_op &&
                 w_min_sv > std::sqrt(0.5) * sqrt_sr && wwt_fro <= (20.0 / 19.0) * star_wwt_fro;
  lbl.r3_double_prime = w_op > (20.0 / 19.0) * star_op && wwt_fro <= (10.0 / 9.0) * star_wwt_fro;
  lbl.r3_triple_prime = wwt_fro > (10.0 / 9.0) * star_wwt_fro;
  return lbl;
}

Matrix materialize_hessian(const ObjectiveHandle& h, const FactorPair& w, double* asym_residual) {
  const Index n = h.n(), m = h.m(), r = h.r();
  const Index dim = h.dim();
  if (dim > 2000) {
    throw std::invalid_argument("materialize_hessian: (n+m) r > 2000 is beyond desk scale");
  }
  Matrix hess(dim, dim);
  Vector basis = Vector::Zero(dim);
  for (Index i = 0; i < dim; ++i) {
    basis(i) = 1.0;
    hess.col(i) = flatten(h.hess_apply(w, unflatten(basis, n, m, r)), n, m);
    basis(i) = 0.0;
  }
  if (asym_residual) {
    *asym_residual = (hess - hess.transpose()).norm() / std::max(1.0, hess.norm());
  }
  return 0.5 * (hess + hess.transpose());
}

std::pair<double, Vector> dense_min_eig(const ObjectiveHandle& h, const FactorPair& w) {
  const Matrix hess = materialize_hessian(h, w);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hess);
  return {eig.eigenvalues()(0), eig.eigenvectors().col(0)};
}

bool verify_surrogate_distance_bound(const ObjectiveHandle& h, const FactorPair& w,
                                     const GroundTruth& gt) {
  const double lhs = h.min_curvature_bound(w);
  const double dist = factor_distance(w, gt.wstar);
  const double rhs = (2.0 * h.lipschitz_grad() + 0.5) * (2.0 * w.norm() + dist) * dist;
  return lhs <= rhs + 1e-10 * std::max(1.0, rhs);
}

namespace {

constexpr int kRejectionBudget = 10000;

// Rebuilds a stacked factor from prescribed singular values and the
// orthonormal factors of a Gaussian draw.
FactorPair with_spectrum(Rng& rng, Index n, Index m, Index r, const Vector& sv) {
  const Matrix g = rng.gaussian_matrix(n + m, r);
  Eigen::BDCSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix w = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  return {w.topRows(n), w.bottomRows(m)};
}

FactorPair perturbed(Rng& rng, const FactorPair& wstar, double radius) {
  Matrix e = rng.gaussian_matrix(wstar.n() + wstar.m(), wstar.r());
  e *= radius / e.norm();
  return {wstar.U + e.topRows(wstar.n()), wstar.V + e.bottomRows(wstar.m())};
}

}  // namespace

RegionAuditReport verify_region_inequalities(const ObjectiveHandle& h, const GroundTruth& gt,
                                             int samples_per_region, std::uint64_t seed) {
  const Index n = h.n(), m = h.m(), r = h.r();
  const SaddleConstants c;
  const double sqrt_sr = std::sqrt(gt.sigma_r);
  const double star_wwt_fro = factor_gram_fro_norm(gt.wstar);
  const double star_op = factor_spectral_norm(gt.wstar);
  Rng rng(mix_seed(seed, 0x7e91));

  RegionAuditReport report;
  auto audit = [&](const char* name, auto member, auto sampler, auto violated) {
    RegionCheckStats stats;
    stats.region = name;
    stats.requested = samples_per_region;
    int attempts = 0;
    while (stats.sampled < samples_per_region && attempts < kRejectionBudget) {
      ++attempts;
      const FactorPair w = sampler();
      const RegionLabel lbl = classify_region(w, gt);
      if (!member(lbl)) continue;
      ++stats.sampled;
      if (violated(w)) ++stats.violations;
    }
    stats.sampling_exhausted = stats.sampled < samples_per_region;
    report.regions.push_back(std::move(stats));
  };

  // R1: the local regularity inequality.
  audit(
      "R1", [](const RegionLabel& l) { return l.r1; },
      [&] { return perturbed(rng, gt.wstar, rng.uniform(0.0, 0.99) * sqrt_sr); },
      [&](const FactorPair& w) {
        const Alignment al = procrustes_align(w.stacked(), gt.wstar.stacked());
        const FactorPair grad = h.gradient(w);
        const Matrix aligned = gt.wstar.stacked() * al.rotation;
        const FactorPair diff{w.U - aligned.topRows(n), w.V - aligned.bottomRows(m)};
        const double lhs = dot(grad, diff);
        const double rhs = c.c_alpha * gt.sigma_r * al.distance * al.distance +
                           c.c_beta / gt.sigma_1 * grad.squared_norm();
        return lhs < rhs - 1e-10 * std::max(1.0, std::abs(rhs));
      });

  // R2: a direction of large negative curvature exists.
  audit(
      "R2", [](const RegionLabel& l) { return l.r2; },
      [&]() -> FactorPair {
        // Gaussian scaled into the Frobenius ball, smallest singular value
        // clamped under the region threshold.
        const double scale = rng.uniform(0.05, 0.9);
        Vector sv(r);
        for (Index i = 0; i < r; ++i) sv(i) = rng.uniform(0.0, 1.0);
        std::sort(sv.data(), sv.data() + r, std::greater<double>());
        sv *= std::sqrt(star_wwt_fro) * scale / std::max(1e-12, sv.norm());
        sv(r - 1) = std::min(sv(r - 1), rng.uniform(0.0, 0.9) * std::sqrt(0.5) * sqrt_sr);
        return with_spectrum(rng, n, m, r, sv);
      },
      [&](const FactorPair& w) {
        const double lambda_min = dense_min_eig(h, w).first;
        return lambda_min > -c.c_gamma * gt.sigma_r + 1e-10 * std::max(1.0, gt.sigma_r);
      });

  // R3': large gradient at scale sigma_r^{3/2}.
  audit(
      "R3p", [](const RegionLabel& l) { return l.r3_prime; },
      [&] { return perturbed(rng, gt.wstar, rng.uniform(1.05, 1.9) * sqrt_sr); },
      [&](const FactorPair& w) {
        return h.gradient(w).norm() <
               c.c_eps * std::pow(gt.sigma_r, 1.5) - 1e-12;
      });

  // R3'': large spectral norm, controlled Gram norm.
  audit(
      "R3pp", [](const RegionLabel& l) { return l.r3_double_prime; },
      [&]() -> FactorPair {
        Vector sv(r);
        const double lo = (20.0 / 19.0) * star_op;
        const double hi = std::sqrt((10.0 / 9.0) * star_wwt_fro);
        if (hi <= lo) return perturbed(rng, gt.wstar, sqrt_sr);  // window empty; reject later
        sv(0) = rng.uniform(lo * 1.001, hi * 0.999);
        // Keep the fourth-power sum under the Gram-norm bound.
        const double budget = std::pow((10.0 / 9.0) * star_wwt_fro * 0.998, 2.0);
        double remaining = budget - std::pow(sv(0), 4.0);
        for (Index i = 1; i < r; ++i) {
          const double cap = std::pow(std::max(0.0, remaining), 0.25);
          sv(i) = rng.uniform(0.0, 0.5) * std::min(cap, sv(0));
          remaining -= std::pow(sv(i), 4.0);
        }
        return with_spectrum(rng, n, m, r, sv);
      },
      [&](const FactorPair& w) {
        return h.gradient(w).norm() < c.c_eps * std::pow(factor_spectral_norm(w), 3.0) - 1e-12;
      });

  // R3''': Gram norm beyond the outer shell.
  audit(
      "R3ppp", [](const RegionLabel& l) { return l.r3_triple_prime; },
      [&] {
        FactorPair w = perturbed(rng, gt.wstar, rng.uniform(0.0, 1.0) * gt.wstar.norm());
        const double target = (10.0 / 9.0) * star_wwt_fro * rng.uniform(1.05, 3.0);
        // ||W W^T||_F scales quadratically with W.
        w *= std::sqrt(target / factor_gram_fro_norm(w));
        return w;
      },
      [&](const FactorPair& w) {
        return h.gradient(w).norm() < c.c_eps * std::pow(factor_gram_fro_norm(w), 1.5) - 1e-12;
      });

  return report;
}

BudgetReport theoretical_budgets(const BudgetInputs& in) {
  if (in.l_g <= 0 || in.l_h <= 0 || in.sigma_r <= 0 || in.gamma0 <= 0 || in.eps_g <= 0 ||
      in.eps_H <= 0 || in.r_level <= 0 || in.rho <= 0 || in.rho >= 1 || in.n_dim < 1 ||
      in.m_bound <= 0) {
    throw std::invalid_argument("theoretical_budgets: inputs must be positive (rho in (0,1))");
  }
  const SaddleConstants& c = in.constants;
  BudgetReport rep;
  rep.inputs = in;

  rep.nu_min = 2.0 * in.theta * (1.0 - in.eta) / in.l_g;
  const double rate = rep.nu_min * c.c_alpha * in.sigma_r;
  if (rate >= 1.0) {
    throw std::domain_error(
        "theoretical_budgets: nu_min c_alpha sigma_r >= 1, the rate logarithm is undefined "
        "(inconsistent L_g / sigma_r inputs)");
  }

  const double sqrt2_g0 = std::sqrt(2.0 * in.gamma0);
  rep.c_hat = std::max(
      std::sqrt(in.gamma0) * std::pow(sqrt2_g0 + in.r_level, 2.0) / (2.0 * c.c_beta),
      (2.0 * in.lipschitz_grad + 0.5) * (2.0 * in.r_level + sqrt2_g0) * sqrt2_g0);

  rep.t_cap = 2.0 * (std::log(rep.c_hat) + std::log(std::max(1.0 / in.eps_g, 1.0 / in.eps_H))) /
              std::log(1.0 / (1.0 - rate));

  rep.c_grad = in.eta * std::min(1.0, 2.0 * in.theta * (1.0 - in.eta) / in.l_g);
  const double nc_term = 3.0 * in.theta * (1.0 - in.eta) / in.l_h;
  rep.c_nc = in.eta * std::pow(c.c_gamma, 3.0) / 16.0 * std::min(1.0, nc_term * nc_term);
  rep.c_local = in.eta * std::min(4.0 * c.c_beta / std::pow(sqrt2_g0 + in.r_level, 2.0),
                                  2.0 * in.theta * (1.0 - in.eta) / in.l_g);

  const double c_s = c.c_s();
  rep.k_large = 8.0 * (in.g_w0 - in.g_low) /
                (std::min(c_s * c_s * rep.c_grad, rep.c_nc) * std::pow(in.sigma_r, 3.0));
  rep.k_local = std::log2(2.0 * in.gamma0 / in.sigma_r);
  rep.k_outer = rep.k_large + rep.k_local;
  rep.k_total = rep.k_large + rep.t_cap * rep.k_local;

  rep.c_meo = std::log(2.75 * static_cast<double>(in.n_dim) / (in.rho * in.rho)) *
              std::sqrt(in.m_bound) / 2.0;
  rep.n_meo_cap = meo_iteration_bound(in.n_dim, rep.c_meo, c.c_gamma, in.sigma_r);
  return rep;
}

int meo_iteration_bound(Index n_dim, double c_meo, double c_gamma, double sigma_r) {
  const double raw =
      1.0 + std::ceil(std::sqrt(2.0) * c_meo / std::sqrt(c_gamma) / std::sqrt(sigma_r));
  return static_cast<int>(std::min(static_cast<double>(n_dim), raw));
}

}  // namespace lrsaddle
