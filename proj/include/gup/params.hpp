#pragma once

// Deformation parameters of the modified Heisenberg algebra, their validity
// constraints, the free-particle velocity bound and the 1D uncertainty bound.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gup/errors.hpp"

namespace gup {

/// Physical configuration: linear (alpha) and quadratic (beta) momentum
/// deformation coefficients, optional integer linking beta = (n+1) alpha^2,
/// particle mass and hbar. Natural units throughout; nothing is enforced
/// beyond positivity of mass and hbar.
struct GupParams {
  double alpha = 0.0; // dimension 1/momentum, >= 0
  double beta = 0.0;  // dimension 1/momentum^2
  std::optional<int> n_link{};
  double mass = 1.0;
  double hbar = 1.0;
};

/// Validity findings for a parameter set. positive_vmax implies real_root
/// and nondegenerate.
struct ConstraintReport {
  bool real_root = false;     // beta > 3.5 alpha^2
  bool nondegenerate = false; // beta != 4 alpha^2
  bool positive_vmax = false; // beta > 4 alpha^2
  std::optional<bool> n_gt_3{};
  std::vector<std::string> messages;
};

inline void check_mass_hbar(double mass, double hbar) {
  if (!(mass > 0.0)) throw physics_error("nonpositive_mass", "mass must be positive");
  if (!(hbar > 0.0)) throw physics_error("nonpositive_hbar", "hbar must be positive");
}

/// Convert dimensionless deformation strengths to dimensionful parameters by
/// dividing out a reference momentum scale: alpha = alpha0/P, beta = beta0/P^2.
inline GupParams planck_scale_params(double alpha0, double beta0, double planck_momentum,
                                     double mass, double hbar) {
  if (!(planck_momentum > 0.0))
    throw physics_error("nonpositive_scale", "reference momentum must be positive");
  check_mass_hbar(mass, hbar);
  GupParams p;
  p.alpha = alpha0 / planck_momentum;
  p.beta = beta0 / (planck_momentum * planck_momentum);
  p.mass = mass;
  p.hbar = hbar;
  return p;
}

/// Build parameters from the integer relation beta = (n+1) alpha^2, n >= 1.
inline GupParams params_from_n(double alpha, int n, double mass = 1.0, double hbar = 1.0) {
  if (alpha < 0.0) throw physics_error("negative_alpha", "alpha must be >= 0");
  if (n < 1) throw physics_error("bad_n", "n must be a positive integer");
  check_mass_hbar(mass, hbar);
  GupParams p;
  p.alpha = alpha;
  p.beta = (n + 1) * alpha * alpha;
  p.n_link = n;
  p.mass = mass;
  p.hbar = hbar;
  return p;
}

/// Evaluate the inter-parameter constraints. Strict inequalities on continuous
/// inputs; equality against 4 alpha^2 is tested with relative tolerance 1e-15
/// scaled to alpha^2.
inline ConstraintReport validate_params(const GupParams& p) {
  ConstraintReport r;
  const double a2 = p.alpha * p.alpha;
  const double tol = 1e-15 * std::max(a2, 1e-300);
  r.real_root = p.beta > 3.5 * a2;
  r.nondegenerate = std::abs(p.beta - 4.0 * a2) > tol;
  r.positive_vmax = p.beta > 4.0 * a2 + tol;
  if (p.n_link) {
    r.n_gt_3 = *p.n_link > 3;
    r.messages.push_back(*r.n_gt_3 ? "n > 3: velocity bound is positive"
                                   : "n <= 3: velocity bound is not positive");
  }
  if (!r.real_root) r.messages.push_back("beta <= 3.5 alpha^2: velocity bound is imaginary");
  if (!r.nondegenerate) r.messages.push_back("beta = 4 alpha^2: velocity bound degenerates");
  return r;
}

/// Upper bound on the free-particle speed: the root of the Lagrangian kinetic
/// factor 1 + 2 alpha m v + (8 alpha^2 - 2 beta) m^2 v^2, taken with the
/// negative branch of the square root. Positive iff beta > 4 alpha^2.
inline double max_free_velocity(const GupParams& p) {
  const double a2 = p.alpha * p.alpha;
  const double disc = 2.0 * p.beta - 7.0 * a2;
  if (disc < 0.0)
    throw physics_error("imaginary_root", "2 beta - 7 alpha^2 < 0: velocity bound is imaginary");
  const double den = 2.0 * p.mass * (4.0 * a2 - p.beta);
  if (den == 0.0 || !validate_params(p).nondegenerate)
    throw physics_error("degenerate_denominator", "beta = 4 alpha^2: velocity bound degenerates");
  return (-p.alpha - std::sqrt(disc)) / den;
}

/// 1D uncertainty-product lower bound:
///   (hbar/2) [1 - 2 alpha <|p|> - (2 alpha^2 - 3 beta)((dp)^2 + <p>^2)].
/// Reduces to hbar/2 at alpha = beta = 0.
inline double uncertainty_lower_bound(const GupParams& p, double mean_abs_p, double mean_p,
                                      double delta_p) {
  (void)delta_p; // enters only through the quadratic moment below
  const double quad = delta_p * delta_p + mean_p * mean_p;
  return 0.5 * p.hbar *
         (1.0 - 2.0 * p.alpha * mean_abs_p -
          (2.0 * p.alpha * p.alpha - 3.0 * p.beta) * quad);
}

} // namespace gup
