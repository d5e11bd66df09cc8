#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lrsaddle/objective.hpp"
#include "lrsaddle/solver.hpp"

namespace lrsaddle {

/// Ground-truth description of a planted solution X*.
struct GroundTruth {
  Matrix xstar;
  FactorPair wstar;
  double sigma_r = 0.0;   ///< sigma_r(X*)
  double sigma_1 = 0.0;   ///< ||X*|| (spectral norm)
  double xstar_fro = 0.0; ///< ||X*||_F

  static GroundTruth from(Matrix xstar, Index r);
};

/// Membership flags for the strict-saddle regions. The regions overlap;
/// together they are expected to cover the space of factor matrices.
struct RegionLabel {
  bool r1 = false;
  bool r2 = false;
  bool r3_prime = false;
  bool r3_double_prime = false;
  bool r3_triple_prime = false;

  bool any() const { return r1 || r2 || r3_prime || r3_double_prime || r3_triple_prime; }
  bool only_r2() const { return r2 && !r1 && !r3_prime && !r3_double_prime && !r3_triple_prime; }
  bool only_r3() const {
    return (r3_prime || r3_double_prime || r3_triple_prime) && !r1 && !r2;
  }
};

/// Evaluates the five region predicates at W (non-strict boundaries
/// exactly as defined; a point may satisfy several).
RegionLabel classify_region(const FactorPair& w, const GroundTruth& gt);

/// Materializes the unrolled Hessian column by column via hess_apply on
/// basis directions and symmetrizes. When asym_residual is non-null it
/// receives ||H - H^T||_F / max(1, ||H||_F) before symmetrization.
/// Desk-scale only: requires (n+m) r <= 2000.
Matrix materialize_hessian(const ObjectiveHandle& h, const FactorPair& w,
                           double* asym_residual = nullptr);

/// Exact smallest eigenpair of the materialized Hessian.
std::pair<double, Vector> dense_min_eig(const ObjectiveHandle& h, const FactorPair& w);

/// Checks 2||grad f||_F + 1/2||hat(W)^T W||_F
///   <= (2 L + 1/2)(2||W||_F + dist(W, W*)) dist(W, W*).
bool verify_surrogate_distance_bound(const ObjectiveHandle& h, const FactorPair& w, const GroundTruth& gt);

struct RegionCheckStats {
  std::string region;
  int requested = 0;
  int sampled = 0;
  int violations = 0;
  bool sampling_exhausted = false;  ///< rejection budget ran out (warning, not failure)
};

struct RegionAuditReport {
  std::vector<RegionCheckStats> regions;
  int total_violations() const {
    int acc = 0;
    for (const auto& r : regions) acc += r.violations;
    return acc;
  }
};

/// Samples each strict-saddle region (Gaussian perturbations of W* at
/// calibrated radii plus rescaling, rejection budget 10^4 per region) and
/// checks the strict-saddle inequalities: the regularity condition on R1,
/// the negative-curvature bound on R2 (via the dense eigen-oracle), and
/// the gradient lower bounds on the three R3 pieces. Intended for
/// full-observation instances, where the data-fit assumptions hold.
RegionAuditReport verify_region_inequalities(const ObjectiveHandle& h, const GroundTruth& gt,
                                             int samples_per_region, std::uint64_t seed);

/// Inputs for the worst-case budget formulas. L_g, L_H, G_low and R_L are
/// user-supplied or measured; they never enter the solver itself.
struct BudgetInputs {
  double g_w0 = 0.0;      ///< G(W^0)
  double g_low = 0.0;     ///< lower bound on G
  double l_g = 1.0;       ///< Lipschitz constant of grad G
  double l_h = 1.0;       ///< Lipschitz constant of the Hessian of G
  double sigma_r = 1.0;   ///< sigma_r(X*)
  double gamma0 = 1.0;
  double eps_g = 1e-6;
  double eps_H = 1e-4;
  double r_level = 1.0;          ///< bound on ||W|| over the level set
  double lipschitz_grad = 1.0;   ///< L_{grad f}
  double rho = 0.05;             ///< eigenvalue-oracle failure probability
  Index n_dim = 1;               ///< N = (n+m) r
  double m_bound = 1.0;          ///< bound on the unrolled Hessian norm
  double eta = 0.1;
  double theta = 0.5;
  SaddleConstants constants;
};

struct BudgetReport {
  double nu_min = 0.0;
  double c_hat = 0.0;   ///< the log constant in the local iteration bound
  double c_grad = 0.0;
  double c_nc = 0.0;
  double c_local = 0.0;
  double t_cap = 0.0;   ///< max local-phase iterations per call
  double k_large = 0.0;
  double k_local = 0.0;
  double k_outer = 0.0;
  double k_total = 0.0;
  double c_meo = 0.0;
  int n_meo_cap = 0;
  BudgetInputs inputs;
};

/// Evaluates the worst-case iteration budgets. Throws std::domain_error
/// when nu_min c_alpha sigma_r >= 1 (parameter inconsistency: the rate
/// logarithm is undefined).
BudgetReport theoretical_budgets(const BudgetInputs& in);

/// min{N, 1 + ceil(sqrt(2) C_meo c_gamma^{-1/2} sigma_r^{-1/2})}, the
/// per-call Hessian-vector-product cap of the eigenvalue oracle.
int meo_iteration_bound(Index n_dim, double c_meo, double c_gamma, double sigma_r);

}  // namespace lrsaddle
