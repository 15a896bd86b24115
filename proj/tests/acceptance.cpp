// Acceptance gate: one criterion per invocation (argv[1] = 1..8), one
// PASS/FAIL line per criterion with the measured numbers. Exit 0 on pass,
// 1 on fail. Each check is run exactly as stated, including the tolerances;
// measured values are printed either way so a failure is diagnosable.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "gup/gup.hpp"

using namespace gup;

namespace {

GupParams make(double alpha, double beta) {
  GupParams p;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

int report(int k, bool pass, const std::string& detail) {
  std::printf("CRITERION %d %s: %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
  return pass ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

int criterion_velocity_bound() {
  double worst_residual = 0.0;
  bool positivity_ok = true;
  int points = 0;
  for (double a : {1e-3, 2e-3, 5e-3})
    for (double ratio : {3.6, 3.9, 5.0}) {
      const GupParams p = make(a, ratio * a * a);
      const double v = max_free_velocity(p);
      const double mv = p.mass * v;
      const double residual =
          std::abs(1.0 + 2.0 * p.alpha * mv + (8.0 * p.alpha * p.alpha - 2.0 * p.beta) * mv * mv);
      worst_residual = std::max(worst_residual, residual);
      const bool expect_positive = ratio > 4.0;
      if ((v > 0.0) != expect_positive) positivity_ok = false;
      ++points;
    }
  const bool pass = worst_residual < 1e-10 && positivity_ok && points == 9;
  return report(1, pass,
                fmt("kinetic-factor residual max %.3e over 9 points (tol 1e-10), "
                    "positivity iff beta > 4 alpha^2 ",
                    worst_residual) +
                    (positivity_ok ? "holds" : "violated"));
}

// ---------------------------------------------------------------- criterion 2

int criterion_algebra() {
  using namespace algebra;
  std::vector<std::string> closure;
  for (auto& eq : solve_jacobi_constraints(jacobi_residual()).equations)
    closure.push_back(format_constraint(eq));
  const bool closure_ok =
      closure.size() == 2 && closure[0] == "alpha1=alpha2" && closure[1] == "beta2=2*beta1+alpha1^2";

  bool rep_ok = false;
  const auto rep = match_representation();
  for (auto& eq : rep.equations)
    if (format_constraint(eq) == "b=(n+1)*alpha^2") rep_ok = true;
  const bool special_ok = beta_relation_at(1) == "beta=2*alpha^2";

  const bool pass = closure_ok && rep_ok && special_ok;
  std::string detail = "closure {";
  for (size_t i = 0; i < closure.size(); ++i) detail += (i ? ", " : "") + closure[i];
  detail += "}, representation b=(n+1)*alpha^2 " + std::string(rep_ok ? "derived" : "missing") +
            ", n=1 gives " + beta_relation_at(1);
  return report(2, pass, detail);
}

// ---------------------------------------------------------------- criterion 3

int criterion_trajectory_order() {
  const Boundary b{0.3, 0.8, 1.0, 1.0};
  const double a0 = 1e-2, b0 = 5e-4;
  std::vector<double> sups;
  double worst_boundary = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const GupParams p = make(eps * a0, eps * eps * b0);
    const auto tr = ho_trajectory(b, p);
    worst_boundary = std::max({worst_boundary, std::abs(tr.position(0.0) - b.q0),
                               std::abs(tr.position(b.T) - b.qf)});
    auto res = eom_residual(tr, p);
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) sup = std::max(sup, std::abs(res(b.T * i / 200.0)));
    sups.push_back(sup);
  }
  const double slope = std::log10(sups[0] / sups[2]) / 2.0;
  const bool slope_ok = std::abs(slope - 2.0) <= 0.1;
  const bool boundary_ok = worst_boundary < 1e-12;
  return report(3, slope_ok && boundary_ok,
                fmt("log-log residual slope %.4f (required 2.0 +- 0.1; the perturbative "
                    "path solves its order-by-order equations exactly, so the residual is "
                    "third order), boundary reconstruction max %.2e (tol 1e-12)",
                    slope, worst_boundary));
}

// ---------------------------------------------------------------- criterion 4

int criterion_action_crossval() {
  const Boundary b{0.3, 0.8, 1.0, 1.0};
  const double a0 = 1e-2, b0 = 5e-4;
  const Potential v = [](double q) { return 0.5 * q * q; };

  // clause 1: C(eps) = |closed - quadrature| / eps^2 stable within +-20%
  std::vector<double> cs;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const GupParams p = make(eps * a0, eps * eps * b0);
    const double gap =
        std::abs(ho_action(b, p).total - action_quadrature(ho_trajectory(b, p), p, v));
    cs.push_back(gap / (eps * eps));
  }
  double cmin = cs[0], cmax = cs[0];
  for (double c : cs) {
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  const double mid = 0.5 * (cmin + cmax);
  const bool clause1 = (cmax - mid) <= 0.2 * mid;

  // clause 2: omega -> 0 limit reproduces the free action
  const GupParams p = make(1e-3, 5e-6);
  const Boundary bsmall{0.3, 0.8, 1.0, 1e-4};
  const double ho = ho_action(bsmall, p).total;
  const double fr = free_action({0.3, 0.8, 1.0, 0.0}, p).total;
  const double rel_free = std::abs(ho - fr) / std::abs(fr);
  const bool clause2 = rel_free < 1e-6;

  // clause 3: the two closed forms of the beta piece on a 20-point random grid
  std::uint64_t state = 12345;
  auto next_uniform = [&state] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return double(state >> 11) / 9007199254740992.0;
  };
  double worst_beta = 0.0;
  int got = 0;
  while (got < 20) {
    const double q0 = 3.0 * next_uniform() - 1.5, qf = 3.0 * next_uniform() - 1.5;
    const double T = 0.2 + 2.6 * next_uniform();
    if (std::abs(std::sin(T)) < 1e-2) continue;
    ++got;
    const double route_a = ho_action({q0, qf, T, 1.0}, make(0.0, 5e-6)).s_beta;
    const cplx route_b = detail::ho_sbeta_c(q0, qf, cplx(T), 1.0, 1.0, 5e-6);
    worst_beta = std::max(worst_beta, std::abs(route_a - route_b.real()));
  }
  const bool clause3 = worst_beta < 1e-12;

  return report(4, clause1 && clause2 && clause3,
                fmt("C(eps) = {%.3e, %.3e, %.3e}", cs[0], cs[1], cs[2]) +
                    (clause1 ? " stable" : " not stable within +-20% (the gap is third "
                                           "order, so C falls ~10x per eps decade)") +
                    fmt("; free-limit rel %.2e (tol 1e-6)", rel_free) +
                    fmt("; beta-piece identity max %.2e (tol 1e-12)", worst_beta));
}

// ---------------------------------------------------------------- criterion 5

int criterion_spectrum_oracle() {
  HermiteBasis basis{1.0, 1.0, 1.0, 200};
  bool pass = true;
  double worst = 0.0;
  std::string detail;
  for (double u : {1e-4, 1e-3}) {
    const auto sp = diagonalize_oracle(hamiltonian_matrix(make(0.0, u), basis));
    double worst_u = 0.0;
    for (int n = 0; n <= 10; ++n) {
      const double first_order = energy_n(make(0.0, u), basis, n) - (n + 0.5);
      const double measured = sp.energies[n] - (n + 0.5);
      worst_u = std::max(worst_u, std::abs(measured - first_order) / first_order);
    }
    if (worst_u > 0.02) pass = false;
    worst = std::max(worst, worst_u);
    detail += fmt("u=%.0e worst rel dev %.4f; ", u, worst_u);
  }
  detail += "(tol 0.02; the defect is the second-order shift the first-order formula "
            "omits, which crosses 2% near u=7e-4)";
  return report(5, pass, detail);
}

// ---------------------------------------------------------------- criterion 6

int criterion_mehler() {
  double worst = 0.0;
  int points = 0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      for (double t : {-0.3, -0.1, 0.05, 0.2, 0.3})
        for (double x : {-2.0, -0.7, 0.0, 1.1, 2.0})
          for (double y : {-2.0, -0.5, 0.3, 1.4, 2.0}) {
            const cplx closed = mehler_closed(m, n, cplx(t), x, y);
            double scale = 0.0;
            const cplx partial = mehler_partial(m, n, cplx(t), x, y, 60, &scale);
            worst = std::max(worst, std::abs(closed - partial) / std::max(scale, 1.0));
            ++points;
          }
  const bool pass = worst < 1e-9 && points == 3125;
  return report(6, pass,
                fmt("closed vs K=60 partial: max deviation %.3e relative to the "
                    "summation magnitude over %d points (tol 1e-9)",
                    worst, double(points)));
}

// ---------------------------------------------------------------- criterion 7

int criterion_kernel_routes() {
  HermiteBasis basis{1.0, 1.0, 1.0, 120};

  // clause 1: undeformed value at coincident endpoints
  const cplx k00 =
      spectral_kernel(make(0.0, 0.0), basis, {0.0, 0.0, 1.0, 1.0}, cplx(0.0, -1.0), 80).amplitude;
  const double exact = std::sqrt(1.0 / (2.0 * M_PI * std::sinh(1.0)));
  const double dev0 = std::abs(k00 - exact);
  const bool clause1 = dev0 < 1e-8;

  // clause 2: first-order slopes across the three routes
  const Boundary b{0.2, 0.5, 1.0, 1.0};
  const cplx tc(0.0, -1.0);
  const double h = 1e-6;
  auto slopes = [&](auto&& eval) {
    const cplx k0 = eval(make(0.0, 0.0));
    return std::pair<cplx, cplx>{(eval(make(h, 0.0)) - k0) / h, (eval(make(0.0, h)) - k0) / h};
  };
  auto [sa, sb] = slopes([&](const GupParams& p) {
    return spectral_kernel(p, basis, b, tc, 80).amplitude;
  });
  auto [ta, tb] = slopes([&](const GupParams& p) {
    return ho_kernel_tilde(p, basis, b, tc).amplitude;
  });
  auto [ca, cb] = slopes([&](const GupParams& p) {
    return ho_kernel_semiclassical_euclidean(b, 1.0, p).amplitude;
  });
  auto rel = [](cplx x, cplx y) { return std::abs(x - y) / std::abs(x); };
  const double alpha_spread = std::max(rel(sa, ta), rel(sa, ca));
  const double beta_spread = std::max(rel(sb, tb), rel(sb, cb));
  const bool clause2 = alpha_spread < 1e-6 && beta_spread < 1e-6;

  return report(7, clause1 && clause2,
                fmt("undeformed value dev %.2e (tol 1e-8); slope spreads alpha %.2e, "
                    "beta %.2e across sum/resummed/semiclassical (tol 1e-6)",
                    dev0, alpha_spread, beta_spread));
}

// ---------------------------------------------------------------- criterion 8

int criterion_lattice_oracle() {
  // clause 1: gaussian-moment oracle for the single-slice coefficients
  const double m = 1.3, hb = 0.7, dq = 0.35, tau = 0.6;
  const cplx mu = m * dq / tau;
  const cplx var = cplx(0.0, -1.0) * m * hb / tau;
  std::vector<cplx> M(7);
  M[0] = 1.0;
  M[1] = mu;
  for (int k = 2; k <= 6; ++k) M[k] = mu * M[k - 1] + double(k - 1) * var * M[k - 2];
  const cplx it_hm = detail::kI * tau / (hb * m);
  const cplx g_alpha = it_hm * M[3];
  const cplx g_beta = -it_hm * M[4];
  const cplx g_alpha2 = -0.5 * it_hm * M[4] - 0.5 * (tau * tau / (hb * hb * m * m)) * M[6];

  const cplx b_alpha = 3.0 * m * dq / tau;
  const cplx e_alpha = detail::kI * m * m * dq * dq * dq / (hb * tau * tau);
  const cplx c_alpha = b_alpha + e_alpha;
  const cplx c_beta = 3.0 * detail::kI * hb * m / tau - 6.0 * m * m * dq * dq / (tau * tau) -
                      detail::kI * m * m * m * dq * dq * dq * dq / (hb * tau * tau * tau);
  const cplx c_alpha2 = -6.0 * detail::kI * hb * m / tau +
                        19.5 * m * m * dq * dq / (tau * tau) +
                        4.0 * detail::kI * m * m * m * dq * dq * dq * dq / (hb * tau * tau * tau) +
                        0.5 * e_alpha * e_alpha + b_alpha * e_alpha;
  const double coeff_dev = std::max({std::abs(c_alpha - g_alpha) / std::abs(g_alpha),
                                     std::abs(c_beta - g_beta) / std::abs(g_beta),
                                     std::abs(c_alpha2 - g_alpha2) / std::abs(g_alpha2)});
  const bool clause1 = coeff_dev < 1e-10;

  // clause 2: bridge-reweighting benchmark, deterministic per seed
  const Boundary b{0.0, 0.5, 1.0, 0.0};
  SliceConfig cfg;
  cfg.n_slices = 64;
  cfg.tau = 1.0 / 64.0;
  const GupParams p = make(0.0, 1e-4);
  const auto est = euclidean_mc_kernel(b, cfg, p, {}, 100000, 42);
  const auto rerun = euclidean_mc_kernel(b, cfg, p, {}, 100000, 42);
  const double predicted = 1.0 + 1e-4 * (-3.0 + 6.0 * 0.25 - 0.0625);
  const double sigmas = std::abs(est.mean.real() - predicted) / est.std_error;
  const bool clause2 = sigmas < 3.0 && est.mean == rerun.mean;

  return report(8, clause1 && clause2,
                fmt("moment-oracle coefficient dev %.2e (tol 1e-10); MC %.6f +- %.6f",
                    coeff_dev, est.mean.real(), est.std_error) +
                    fmt(" vs predicted %.6f (%.2f sigma), deterministic rerun ", predicted,
                        sigmas) +
                    (est.mean == rerun.mean ? "identical" : "DIFFERS"));
}

} // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
    return 2;
  }
  switch (std::atoi(argv[1])) {
    case 1: return criterion_velocity_bound();
    case 2: return criterion_algebra();
    case 3: return criterion_trajectory_order();
    case 4: return criterion_action_crossval();
    case 5: return criterion_spectrum_oracle();
    case 6: return criterion_mehler();
    case 7: return criterion_kernel_routes();
    case 8: return criterion_lattice_oracle();
    default:
      std::fprintf(stderr, "unknown criterion\n");
      return 2;
  }
}
