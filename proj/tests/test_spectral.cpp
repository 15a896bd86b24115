#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gup/numerics.hpp"
#include "gup/spectral.hpp"

using namespace gup;

namespace {
GupParams make(double alpha, double beta) {
  GupParams p;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}
const GupParams kOff = make(0.0, 0.0);
const HermiteBasis kBasis{1.0, 1.0, 1.0, 64};

// quadrature of f over the real line on a wide fixed window (integrands here
// carry gaussian envelopes, so the truncation error is far below tolerance)
template <typename F>
auto line_integral(F&& f) {
  const auto rule = gauss_rule(QuadKind::legendre, 256);
  return rule.integrate(f, -12.0, 12.0);
}
} // namespace

TEST_CASE("eigenfunctions are orthonormal") {
  const int n = 20;
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const double gram = line_integral(
          [&](double q) { return phi_n(kBasis, i, q) * phi_n(kBasis, j, q); });
      worst = std::max(worst, std::abs(gram - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("eigenfunctions have definite parity") {
  for (int n : {0, 1, 4, 7, 12}) {
    for (double q : {0.3, 1.1, 2.4}) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(phi_n(kBasis, n, -q) == Catch::Approx(sign * phi_n(kBasis, n, q)).margin(1e-14));
    }
  }
}

TEST_CASE("hermite polynomials satisfy the explicit low orders") {
  CHECK(hermite_poly(0, 0.7) == 1.0);
  CHECK(hermite_poly(1, 0.7) == Catch::Approx(1.4));
  CHECK(hermite_poly(2, 0.7) == Catch::Approx(4 * 0.49 - 2).epsilon(1e-14));
  CHECK(hermite_poly(3, 0.7) == Catch::Approx(8 * 0.343 - 12 * 0.7).epsilon(1e-14));
}

TEST_CASE("energies reduce to the oscillator ladder when undeformed") {
  for (int n : {0, 1, 5, 10})
    CHECK(energy_n(kOff, kBasis, n) == Catch::Approx((n + 0.5)).epsilon(1e-15));
  // quartic-coupling shift: 3(2n^2+2n+1)/(2(2n+1)) * (n+1/2) per unit (alpha^2/2+beta)
  const double beta = 1e-4;
  const int n = 3;
  const double shift = energy_n(make(0.0, beta), kBasis, n) - (n + 0.5);
  const double slope = 3.0 * (2 * n * n + 2 * n + 1) / (2.0 * (2 * n + 1)) * (n + 0.5);
  CHECK(shift == Catch::Approx(beta * slope).epsilon(1e-12));
}

TEST_CASE("hamiltonian matrix is hermitian with the stated sparsity") {
  const auto h = hamiltonian_matrix(make(1e-3, 1e-4), kBasis);
  const int N = kBasis.n_max;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      REQUIRE(std::abs(h[i][j] - std::conj(h[j][i])) < 1e-14);
      const int d = std::abs(i - j);
      if (d > 4) REQUIRE(std::abs(h[i][j]) == 0.0);
      // odd couplings are purely imaginary (cubic term), even ones real
      if (d == 1 || d == 3) REQUIRE(h[i][j].real() == 0.0);
      if (d == 0 || d == 2 || d == 4) REQUIRE(h[i][j].imag() == 0.0);
    }
}

TEST_CASE("parity selection rules are exact structural zeros") {
  // the cubic momentum term only links |m-n| in {1,3}; the quartic one only
  // |m-n| in {0,2,4} — read off the split between imaginary and real parts
  const auto h = hamiltonian_matrix(make(1e-3, 1e-4), kBasis);
  CHECK(h[0][5] == cplx(0.0));
  CHECK(h[2][7] == cplx(0.0));
  CHECK(std::abs(h[0][1].imag()) > 0.0);
  CHECK(std::abs(h[0][3].imag()) > 0.0);
  CHECK(std::abs(h[0][2].real()) > 0.0);
  CHECK(std::abs(h[0][4].real()) > 0.0);
}

TEST_CASE("diagonalization oracle matches perturbation theory at weak coupling") {
  HermiteBasis basis{1.0, 1.0, 1.0, 100};
  const double u = 1e-4; // beta m hbar^2 omega^2
  const auto sp = diagonalize_oracle(hamiltonian_matrix(make(0.0, u), basis));
  REQUIRE(sp.numeric);
  for (int n = 0; n <= 10; ++n) {
    const double shift_pred = u * 3.0 * (2 * n * n + 2 * n + 1) / 2.0 * (n + 0.5);
    const double dev = std::abs(sp.energies[n] - energy_n(make(0.0, u), basis, n));
    REQUIRE(dev / shift_pred < 0.02);
  }
}

TEST_CASE("deviation from first-order theory is the second-order shift") {
  // at fixed n the defect grows quadratically in the coupling
  HermiteBasis basis{1.0, 1.0, 1.0, 80};
  const int n = 5;
  auto defect = [&](double u) {
    const auto sp = diagonalize_oracle(hamiltonian_matrix(make(0.0, u), basis));
    return std::abs(sp.energies[n] - energy_n(make(0.0, u), basis, n));
  };
  const double r = defect(2e-4) / defect(1e-4);
  CHECK(r == Catch::Approx(4.0).margin(0.2));
}

TEST_CASE("complex hermitian embedding agrees with known eigenvalues") {
  // pauli-y-like matrix: eigenvalues -1, 1
  CMatrix m{{cplx(0.0), cplx(0.0, -1.0)}, {cplx(0.0, 1.0), cplx(0.0)}};
  // embedding path needs n_max-sized input only for the hamiltonian; the
  // oracle itself accepts any hermitian matrix
  const auto sp = diagonalize_oracle(m);
  CHECK(sp.energies[0] == Catch::Approx(-1.0).epsilon(1e-12));
  CHECK(sp.energies[1] == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(diagonalize_oracle(CMatrix{{cplx(0.0), cplx(1.0)}, {cplx(2.0), cplx(0.0)}}),
                  physics_error);
}

TEST_CASE("perturbed eigenfunctions deviate from unit norm at second order") {
  const int n = 2;
  auto norm_defect = [&](double alpha) {
    const GupParams p = make(alpha, 0.0);
    const cplx nrm = line_integral([&](double q) {
      const cplx v = psi_n(p, kBasis, n, q);
      return v * std::conj(v);
    });
    return std::abs(nrm.real() - 1.0);
  };
  const double d1 = norm_defect(1e-3), d2 = norm_defect(2e-3);
  CHECK(d2 / d1 == Catch::Approx(4.0).margin(0.1));
}

TEST_CASE("first-order mixing overlaps match the ladder coefficients") {
  const int n = 2;
  const double alpha = 1e-3;
  const GupParams p = make(alpha, 0.0);
  // <phi_{n+3} | psi_n> = -i alpha/(m hbar w) (m hbar w/2)^{3/2} sqrt((n+1)(n+2)(n+3))/3
  const cplx overlap = line_integral(
      [&](double q) { return phi_n(kBasis, n + 3, q) * psi_n(p, kBasis, n, q); });
  const double s32 = std::pow(0.5, 1.5);
  const cplx expect = -detail::kI * alpha * s32 * std::sqrt(3.0 * 4.0 * 5.0) / 3.0;
  CHECK(std::abs(overlap - expect) < 1e-12);
  CHECK_THROWS_AS(psi_n(p, kBasis, kBasis.n_max - 3, 0.0), physics_error);
}

TEST_CASE("generating function closed form holds at its anchor points") {
  // t = 0 collapses to the product of the two polynomials
  CHECK(std::abs(mehler_closed(2, 3, cplx(0.0), 0.7, -0.4) -
                 hermite_poly(2, 0.7) * hermite_poly(3, -0.4)) < 1e-13);
  // classic bilinear value at the origin
  CHECK(mehler_closed(0, 0, cplx(0.1), 0.0, 0.0).real() ==
        Catch::Approx(std::pow(0.96, -0.5)).epsilon(1e-12));
  CHECK(std::abs(mehler_closed(1, 0, cplx(0.2), 0.5, -0.3) -
                 mehler_partial(1, 0, cplx(0.2), 0.5, -0.3, 40)) < 1e-10);
  CHECK_THROWS_AS(mehler_closed(0, 0, cplx(0.5), 0.0, 0.0), physics_error);
  CHECK_THROWS_AS(mehler_closed(9, 0, cplx(0.1), 0.0, 0.0), physics_error);
}

TEST_CASE("partial sums converge geometrically inside the domain") {
  const cplx t(0.3);
  const double x = 1.5, y = -1.0;
  double prev_step = 0.0;
  for (int K = 30; K <= 60; K += 10) {
    const double step = std::abs(mehler_partial(2, 1, t, x, y, K) -
                                 mehler_partial(2, 1, t, x, y, K - 1));
    if (prev_step > 0.0) CHECK(step < prev_step);
    prev_step = step;
  }
  CHECK(std::abs(mehler_partial(2, 1, cplx(0.0), x, y, 0) -
                 hermite_poly(2, x) * hermite_poly(1, y)) < 1e-13);
}

TEST_CASE("spectral sum reproduces the exact undeformed euclidean kernel") {
  HermiteBasis basis{1.0, 1.0, 1.0, 80};
  const Boundary b{0.0, 0.0, 1.0, 1.0};
  const cplx k = spectral_kernel(kOff, basis, b, cplx(0.0, -1.0), 60).amplitude;
  CHECK(std::abs(k - std::sqrt(1.0 / (2.0 * M_PI * std::sinh(1.0)))) < 1e-8);
}

TEST_CASE("spectral and resummed kernels agree on frozen slope values") {
  HermiteBasis basis{1.0, 1.0, 1.0, 120};
  const Boundary b{0.2, 0.5, 1.0, 1.0};
  const cplx tc(0.0, -1.0);
  const cplx k0 = spectral_kernel(kOff, basis, b, tc, 80).amplitude;
  CHECK(std::abs(k0 - 0.3312252844111746) < 1e-12);

  const double h = 1e-6;
  const cplx beta_slope = (spectral_kernel(make(0.0, h), basis, b, tc, 80).amplitude - k0) / h;
  CHECK(std::abs(beta_slope - cplx(-1.1095742828347437)) < 1e-6);
  const cplx alpha_slope = (spectral_kernel(make(h, 0.0), basis, b, tc, 80).amplitude - k0) / h;
  CHECK(std::abs(alpha_slope - cplx(0.0, 0.33392158306982195)) < 1e-6);

  // closed-form resummation reproduces both slopes
  const cplx t0 = ho_kernel_tilde(kOff, basis, b, tc).amplitude;
  CHECK(std::abs(t0 - k0) < 1e-10);
  const cplx tb = (ho_kernel_tilde(make(0.0, h), basis, b, tc).amplitude - t0) / h;
  CHECK(std::abs(tb - beta_slope) < 1e-6);
  const cplx ta = (ho_kernel_tilde(make(h, 0.0), basis, b, tc).amplitude - t0) / h;
  CHECK(std::abs(ta - alpha_slope) < 1e-6);
}

TEST_CASE("resummed factors vanish where symmetry demands") {
  HermiteBasis basis{1.0, 1.0, 1.0, 64};
  const auto f0 = tilde_factors(kOff, basis, {0.0, 0.0, 1.0, 1.0}, cplx(0.0, -1.0));
  CHECK(std::abs(f0.J - 1.0) < 1e-15); // undeformed: bare factor
  // odd factors carry (q0 - qf): they vanish at coincident endpoints
  const auto fc = tilde_factors(make(1e-3, 1e-4), basis, {0.7, 0.7, 1.0, 1.0}, cplx(0.0, -1.0));
  CHECK(std::abs(fc.M1) < 1e-15);
  CHECK(std::abs(fc.M2) < 1e-15);
}

TEST_CASE("spectral sum guards its convergence domain") {
  HermiteBasis basis{1.0, 1.0, 1.0, 64};
  const Boundary b{0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(spectral_kernel(kOff, basis, b, cplx(1.0, 0.0), 40), physics_error);
  CHECK_THROWS_AS(spectral_kernel(kOff, basis, b, cplx(0.0, -1.0), 61), physics_error);
  CHECK_THROWS_AS(spectral_kernel(kOff, basis, b, cplx(0.0, -1.0), 0), physics_error);
}
