#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gup/params.hpp"

using namespace gup;

namespace {
GupParams make(double alpha, double beta, double mass = 1.0, double hbar = 1.0) {
  GupParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.mass = mass;
  p.hbar = hbar;
  return p;
}
// deformed kinetic factor whose negative root defines the velocity bound
double kinetic_factor(const GupParams& p, double v) {
  const double mv = p.mass * v;
  return 1.0 + 2.0 * p.alpha * mv + (8.0 * p.alpha * p.alpha - 2.0 * p.beta) * mv * mv;
}
} // namespace

TEST_CASE("constraint report across the three beta regimes") {
  const double a = 1e-3, a2 = a * a;

  const auto strong = validate_params(make(a, 5.0 * a2));
  CHECK(strong.real_root);
  CHECK(strong.nondegenerate);
  CHECK(strong.positive_vmax);

  const auto weak = validate_params(make(a, 3.7 * a2));
  CHECK(weak.real_root);
  CHECK(weak.nondegenerate);
  CHECK_FALSE(weak.positive_vmax);

  const auto none = validate_params(make(a, 3.0 * a2));
  CHECK_FALSE(none.real_root);
  CHECK_FALSE(none.positive_vmax);

  const auto degen = validate_params(make(a, 4.0 * a2));
  CHECK_FALSE(degen.nondegenerate);
  CHECK_FALSE(degen.positive_vmax);
  CHECK_FALSE(degen.messages.empty());
}

TEST_CASE("velocity bound is the root of the kinetic factor") {
  const GupParams p = make(1e-3, 5e-6);
  const double v = max_free_velocity(p);
  CHECK(v == Catch::Approx(1366.0254037844381).epsilon(1e-13));
  CHECK(std::abs(kinetic_factor(p, v)) < 1e-10);
  CHECK(v > 0.0);
}

TEST_CASE("velocity bound sign tracks the beta regime") {
  const double a = 2e-3, a2 = a * a;
  CHECK(max_free_velocity(make(a, 5.0 * a2)) > 0.0);
  CHECK(max_free_velocity(make(a, 3.8 * a2)) < 0.0);
  CHECK_THROWS_AS(max_free_velocity(make(a, 3.0 * a2)), physics_error);
  CHECK_THROWS_AS(max_free_velocity(make(a, 4.0 * a2)), physics_error);
}

TEST_CASE("integer-linked parameters") {
  const GupParams p = params_from_n(1e-3, 4);
  CHECK(p.beta == Catch::Approx(5e-6));
  REQUIRE(p.n_link.has_value());
  CHECK(*p.n_link == 4);
  const auto r = validate_params(p);
  REQUIRE(r.n_gt_3.has_value());
  CHECK(*r.n_gt_3);
  CHECK(r.positive_vmax);

  // n <= 3 puts beta at or below 4 alpha^2: no positive bound
  const auto r3 = validate_params(params_from_n(1e-3, 3));
  CHECK_FALSE(*r3.n_gt_3);
  CHECK_FALSE(r3.positive_vmax);

  CHECK_THROWS_AS(params_from_n(1e-3, 0), physics_error);
  CHECK_THROWS_AS(params_from_n(-1e-3, 2), physics_error);
}

TEST_CASE("reference-scale construction divides out momentum powers") {
  const GupParams p = planck_scale_params(0.5, 2.0, 10.0, 2.0, 3.0);
  CHECK(p.alpha == Catch::Approx(0.05));
  CHECK(p.beta == Catch::Approx(0.02));
  CHECK(p.mass == 2.0);
  CHECK(p.hbar == 3.0);
  CHECK_THROWS_AS(planck_scale_params(0.5, 2.0, 0.0, 1.0, 1.0), physics_error);
  CHECK_THROWS_AS(planck_scale_params(0.5, 2.0, 1.0, -1.0, 1.0), physics_error);
}

TEST_CASE("uncertainty lower bound reduces to hbar/2 and shifts with couplings") {
  GupParams p0 = make(0.0, 0.0);
  CHECK(uncertainty_lower_bound(p0, 1.0, 0.5, 2.0) == Catch::Approx(0.5));

  GupParams p = make(1e-2, 1e-3, 1.0, 2.0);
  const double mean_abs = 0.3, mean = 0.1, dp = 0.4;
  const double quad = dp * dp + mean * mean;
  const double expect =
      0.5 * 2.0 * (1.0 - 2.0 * p.alpha * mean_abs - (2.0 * p.alpha * p.alpha - 3.0 * p.beta) * quad);
  CHECK(uncertainty_lower_bound(p, mean_abs, mean, dp) == Catch::Approx(expect).epsilon(1e-14));
  // the 3 beta term raises the bound
  CHECK(uncertainty_lower_bound(make(0.0, 1e-3), 0.0, 0.0, 1.0) > 0.5);
}
