#pragma once

// Hermite-basis machinery for the deformed oscillator: perturbed
// eigenfunctions and energies, a truncated-matrix diagonalization oracle,
// the extended Mehler bilinear generating function, and the spectral kernel
// sum with its closed-form "tilde" factors.

#include <cmath>
#include <complex>
#include <vector>

#include "gup/errors.hpp"
#include "gup/kernels.hpp"
#include "gup/numerics.hpp"
#include "gup/params.hpp"

namespace gup {

/// Oscillator eigenbasis descriptor.
struct HermiteBasis {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  int n_max = 64;
};

inline void check_basis(const HermiteBasis& b) {
  check_mass_hbar(b.mass, b.hbar);
  if (!(b.omega > 0.0)) throw physics_error("nonpositive_omega", "basis needs omega > 0");
  if (b.n_max < 8) throw physics_error("basis_too_small", "n_max must be >= 8");
}

struct Spectrum {
  std::vector<double> energies;
  bool numeric = false; // false: perturbative closed form
};

// --------------------------------------------------------------- Hermite

/// Physicists' Hermite polynomial by the three-term recurrence; works for
/// complex arguments (needed by the Mehler closed form).
template <typename T>
inline T hermite_poly_t(int n, T x) {
  if (n < 0) throw physics_error("bad_index", "Hermite index must be >= 0");
  T h0 = T(1.0);
  if (n == 0) return h0;
  T h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    T h2 = 2.0 * x * h1 - 2.0 * double(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

inline double hermite_poly(int n, double x) { return hermite_poly_t<double>(n, x); }

namespace detail {

// Orthonormal Hermite functions u_0..u_n at xi (weight already absorbed:
// integral of u_m u_n dxi = delta_mn). Stable for large n, no overflow —
// the normalization is folded into the recurrence instead of being applied
// as a huge 1/sqrt(2^n n!) factor at the end.
inline std::vector<double> hermite_functions(int n, double xi) {
  std::vector<double> u(n + 1);
  u[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * xi * xi);
  if (n >= 1) u[1] = std::sqrt(2.0) * xi * u[0];
  for (int k = 1; k < n; ++k)
    u[k + 1] = xi * std::sqrt(2.0 / (k + 1.0)) * u[k] - std::sqrt(k / (k + 1.0)) * u[k - 1];
  return u;
}

} // namespace detail

/// All oscillator eigenfunctions phi_0..phi_n at q in one recurrence pass.
inline std::vector<double> phi_all(const HermiteBasis& b, int n, double q) {
  check_basis(b);
  if (n < 0 || n > b.n_max) throw physics_error("bad_index", "n must be in [0, n_max]");
  const double scale = std::sqrt(b.mass * b.omega / b.hbar);
  auto u = detail::hermite_functions(n, scale * q);
  const double norm = std::sqrt(scale);
  for (auto& v : u) v *= norm;
  return u;
}

/// n-th oscillator eigenfunction (2^n n!)^{-1/2}(mw/pi hbar)^{1/4}
/// H_n(xi) e^{-xi^2/2}, xi = sqrt(mw/hbar) q, via the stable normalized
/// recurrence.
inline double phi_n(const HermiteBasis& b, int n, double q) { return phi_all(b, n, q)[n]; }

// ---------------------------------------------------------------- energies

/// First-order perturbed energy
/// (n + 1/2) hbar w [1 + (3(2n^2+2n+1)/(2(2n+1)))(alpha^2/2 + beta) m hbar w].
inline double energy_n(const GupParams& p, const HermiteBasis& b, int n) {
  if (n < 0) throw physics_error("bad_index", "n must be >= 0");
  const double g = p.alpha * p.alpha / 2.0 + p.beta;
  const double corr =
      3.0 * (2.0 * n * n + 2.0 * n + 1.0) / (2.0 * (2.0 * n + 1.0)) * g * p.mass * b.hbar * b.omega;
  return (n + 0.5) * b.hbar * b.omega * (1.0 + corr);
}

namespace detail {

inline double safe_phi(const std::vector<double>& u, int n) {
  return (n < 0 || n >= int(u.size())) ? 0.0 : u[n];
}

// First-order eigenfunction mixing amplitudes (coefficients of phi_{n+s}).
// The cubic-momentum perturbation mixes s = +-1, +-3 with an overall
// -i alpha/(m hbar w) (m hbar w/2)^{3/2}; the quartic one mixes s = +-2, +-4
// with (alpha^2/2 + beta) m hbar w.
inline double mix3(const std::vector<double>& u, int n, double q_unused = 0) {
  (void)q_unused;
  const double nn = n;
  return std::sqrt(nn * (nn - 1) * (nn - 2)) / 3.0 * safe_phi(u, n - 3) -
         3.0 * nn * std::sqrt(nn) * safe_phi(u, n - 1) -
         3.0 * (nn + 1) * std::sqrt(nn + 1) * safe_phi(u, n + 1) +
         std::sqrt((nn + 1) * (nn + 2) * (nn + 3)) / 3.0 * safe_phi(u, n + 3);
}

inline double mix4(const std::vector<double>& u, int n) {
  const double nn = n;
  return (2 * nn + 3) * std::sqrt((nn + 1) * (nn + 2)) / 4.0 * safe_phi(u, n + 2) -
         (2 * nn - 1) * std::sqrt(nn * (nn - 1)) / 4.0 * safe_phi(u, n - 2) +
         std::sqrt(nn * (nn - 1) * (nn - 2) * (nn - 3)) / 16.0 * safe_phi(u, n - 4) -
         std::sqrt((nn + 1) * (nn + 2) * (nn + 3) * (nn + 4)) / 16.0 * safe_phi(u, n + 4);
}

} // namespace detail

/// First-order perturbed eigenfunction: phi_n plus the odd (imaginary,
/// alpha-weighted) phi_{n+-1,3} mix and the even (alpha^2/2 + beta weighted)
/// phi_{n+-2,4} mix. Needs indices up to n+4, hence n <= n_max - 4.
inline cplx psi_n(const GupParams& p, const HermiteBasis& b, int n, double q) {
  check_basis(b);
  if (n < 0 || n > b.n_max - 4)
    throw physics_error("bad_index", "psi_n needs n in [0, n_max - 4]");
  const auto u = phi_all(b, std::min(b.n_max, n + 4), q);
  const double s32 = std::pow(b.hbar * b.mass * b.omega / 2.0, 1.5);
  const double g = p.alpha * p.alpha / 2.0 + p.beta;
  const cplx odd = -detail::kI * p.alpha / (b.mass * b.hbar * b.omega) * s32 *
                   detail::mix3(u, n);
  const double even = g * b.mass * b.hbar * b.omega * detail::mix4(u, n);
  return u[n] + odd + even;
}

// ------------------------------------------------------------ Hamiltonian

using CMatrix = std::vector<std::vector<cplx>>;

/// Matrix of p0^2/2m - (alpha/m) p0^3 + ((alpha^2/2 + beta)/m) p0^4
/// + (1/2) m w^2 q^2 in the oscillator basis, from ladder operators
/// (p0 = i sqrt(m hbar w / 2) (adag - a)). Hermitian by construction.
inline CMatrix hamiltonian_matrix(const GupParams& p, const HermiteBasis& b) {
  check_basis(b);
  if (b.n_max < 16) throw physics_error("basis_too_small", "hamiltonian needs n_max >= 16");
  const int N = b.n_max;
  const double s = b.mass * b.hbar * b.omega / 2.0; // <p0^2> scale
  const double s32 = std::pow(s, 1.5);
  const double g = p.alpha * p.alpha / 2.0 + p.beta;
  CMatrix h(N, std::vector<cplx>(N, cplx(0.0)));
  for (int n = 0; n < N; ++n) {
    const double nn = n;
    // unperturbed oscillator: p0^2/2m + m w^2 q^2 / 2 (off-diagonals cancel)
    h[n][n] += (nn + 0.5) * b.hbar * b.omega;
    // quartic momentum term
    h[n][n] += g / b.mass * s * s * 3.0 * (2 * nn * nn + 2 * nn + 1);
    if (n + 2 < N) {
      const double e2 = -2.0 * (2 * nn + 3) * std::sqrt((nn + 1) * (nn + 2));
      h[n][n + 2] += g / b.mass * s * s * e2;
      h[n + 2][n] += g / b.mass * s * s * e2;
    }
    if (n + 4 < N) {
      const double e4 = std::sqrt((nn + 1) * (nn + 2) * (nn + 3) * (nn + 4));
      h[n][n + 4] += g / b.mass * s * s * e4;
      h[n + 4][n] += g / b.mass * s * s * e4;
    }
    // cubic momentum term: p0^3 = -i s^{3/2} (adag - a)^3, Hermitian with
    // antisymmetric real ladder part
    if (p.alpha != 0.0) {
      const double c = -p.alpha / b.mass * s32;
      if (n + 1 < N) {
        const double e1 = -3.0 * (nn + 1) * std::sqrt(nn + 1);
        h[n + 1][n] += c * cplx(0.0, -e1);
        h[n][n + 1] += c * cplx(0.0, e1);
      }
      if (n + 3 < N) {
        const double e3 = std::sqrt((nn + 1) * (nn + 2) * (nn + 3));
        h[n + 3][n] += c * cplx(0.0, -e3);
        h[n][n + 3] += c * cplx(0.0, e3);
      }
    }
  }
  return h;
}

/// Eigenvalues of a complex Hermitian matrix via the 2N x 2N real-symmetric
/// embedding [[Re, -Im], [Im, Re]] (each eigenvalue appears twice) and the
/// cyclic-Jacobi solver. Falls back to the N x N real problem when the
/// matrix is purely real.
inline Spectrum diagonalize_oracle(const CMatrix& h) {
  const size_t n = h.size();
  double norm = 0.0;
  bool is_real = true;
  for (size_t i = 0; i < n; ++i) {
    if (h[i].size() != n) throw physics_error("not_square", "matrix must be square");
    for (size_t j = 0; j < n; ++j) {
      norm += std::norm(h[i][j]);
      if (h[i][j].imag() != 0.0) is_real = false;
    }
  }
  norm = std::sqrt(norm);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (std::abs(h[i][j] - std::conj(h[j][i])) > 1e-12 * std::max(1.0, norm))
        throw physics_error("not_hermitian", "diagonalization oracle needs a Hermitian matrix");

  Spectrum sp;
  sp.numeric = true;
  if (is_real) {
    Matrix a(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) a[i][j] = h[i][j].real();
    sp.energies = symmetric_eigen(a);
    return sp;
  }
  Matrix a(2 * n, std::vector<double>(2 * n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      a[i][j] = h[i][j].real();
      a[i + n][j + n] = h[i][j].real();
      a[i][j + n] = -h[i][j].imag();
      a[i + n][j] = h[i][j].imag();
    }
  const auto doubled = symmetric_eigen(a);
  sp.energies.reserve(n);
  for (size_t k = 0; k < doubled.size(); k += 2) sp.energies.push_back(0.5 * (doubled[k] + doubled[k + 1]));
  return sp;
}

// ------------------------------------------------------------------ Mehler

/// Closed form of the bilinear generating function
///   sum_k t^k/k! H_{k+m}(x) H_{k+n}(y)
/// valid for |4t^2| < 1.
inline cplx mehler_closed(int m, int n, cplx t, double x, double y) {
  if (m < 0 || n < 0 || m > 8 || n > 8)
    throw physics_error("bad_index", "closed form implemented for 0 <= m, n <= 8");
  if (!(std::abs(4.0 * t * t) < 1.0))
    throw physics_error("convergence_domain", "|4 t^2| must be < 1");
  const cplx d = 1.0 - 4.0 * t * t;
  const cplx pref = std::pow(d, -(m + n + 1) / 2.0) *
                    std::exp((4.0 * t * x * y - 4.0 * t * t * (x * x + y * y)) / d);
  const cplx sd = std::sqrt(d);
  const cplx X = (x - 2.0 * t * y) / sd;
  const cplx Y = (y - 2.0 * t * x) / sd;
  auto binom = [](int a, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  cplx sum = 0.0;
  double kfact = 1.0;
  for (int k = 0; k <= std::min(m, n); ++k) {
    if (k > 0) kfact *= k;
    sum += std::pow(4.0, k) * kfact * binom(m, k) * binom(n, k) * std::pow(t, k) *
           hermite_poly_t<cplx>(m - k, X) * hermite_poly_t<cplx>(n - k, Y);
  }
  return pref * sum;
}

/// Truncated left-hand side sum_{k<=K} t^k/k! H_{k+m}(x) H_{k+n}(y).
/// If magnitude is non-null it receives sum_{k<=K} |t^k/k! H H|, the working
/// scale of the summation — cancellation-aware comparisons should measure
/// deviations against it rather than against the (possibly tiny) net value.
inline cplx mehler_partial(int m, int n, cplx t, double x, double y, int K,
                           double* magnitude = nullptr) {
  if (m < 0 || n < 0) throw physics_error("bad_index", "indices must be >= 0");
  if (K < 0) throw physics_error("bad_index", "truncation must be >= 0");
  // march the two Hermite sequences along k
  double hm0 = hermite_poly(m, x), hm1 = hermite_poly(m + 1, x);
  double hn0 = hermite_poly(n, y), hn1 = hermite_poly(n + 1, y);
  cplx sum = 0.0;
  double mag = 0.0;
  cplx tk = 1.0; // t^k / k!
  for (int k = 0; k <= K; ++k) {
    sum += tk * hm0 * hn0;
    mag += std::abs(tk * hm0 * hn0);
    if (!std::isfinite(hm0) || !std::isfinite(hn0) || !std::isfinite(std::abs(sum)))
      throw physics_error("magnitude", "partial sum overflowed; reduce K or |x|, |y|");
    // advance H_{k+m} -> H_{k+m+1}
    const double hm2 = 2.0 * x * hm1 - 2.0 * (k + m + 1) * hm0;
    hm0 = hm1;
    hm1 = hm2;
    const double hn2 = 2.0 * y * hn1 - 2.0 * (k + n + 1) * hn0;
    hn0 = hn1;
    hn1 = hn2;
    tk *= t / double(k + 1);
  }
  if (magnitude) *magnitude = mag;
  return sum;
}

// ------------------------------------------------------------ spectral sum

/// The first-order decomposition of the truncated eigenfunction sum:
/// kernel = j0 + beta*j_beta
///        + (i alpha/(m w hbar)) (m w hbar/2)^{3/2} m_sum
///        + beta m hbar w * n_sum.
struct SpectralParts {
  cplx j0{}, j_beta{}, m_sum{}, n_sum{};
  double tail = 0.0;
};

inline SpectralParts spectral_kernel_parts(const HermiteBasis& b, const Boundary& bd,
                                           cplx time, int N) {
  check_basis(b);
  if (N < 1 || N > b.n_max - 4)
    throw physics_error("bad_truncation", "need 1 <= N <= n_max - 4");
  if (!(time.imag() < 0.0))
    throw physics_error("convergence", "spectral sum needs Euclidean-damped time (Im < 0)");
  const auto uf = phi_all(b, N + 4, bd.qf);
  const auto u0 = phi_all(b, N + 4, bd.q0);
  SpectralParts parts;
  cplx last = 0.0;
  for (int n = 0; n <= N; ++n) {
    const cplx en = std::exp(-detail::kI * (n + 0.5) * b.omega * time);
    const double pp = uf[n] * u0[n];
    const cplx jterm = pp * en;
    parts.j0 += jterm;
    // beta-dependent first-order piece of the energy phase
    parts.j_beta += jterm * (-0.75 * detail::kI * (2.0 * n * n + 2.0 * n + 1.0) * b.mass *
                             b.hbar * b.omega * b.omega * time);
    parts.m_sum += en * (uf[n] * detail::mix3(u0, n) - detail::mix3(uf, n) * u0[n]);
    parts.n_sum += en * (detail::mix4(uf, n) * u0[n] + uf[n] * detail::mix4(u0, n));
    if (n == N) last = jterm;
  }
  parts.tail = std::abs(last) / std::max(std::abs(parts.j0), 1e-300);
  return parts;
}

/// Truncated sum over perturbed eigenstates,
/// sum_n psi_n(qf) psi_n*(q0) e^{-(i/hbar) E_n time}, kept to first order in
/// (alpha, beta).
inline KernelValue spectral_kernel(const GupParams& p, const HermiteBasis& b, const Boundary& bd,
                                   cplx time, int N) {
  const auto parts = spectral_kernel_parts(b, bd, time, N);
  const double s32 = std::pow(b.mass * b.omega * b.hbar / 2.0, 1.5);
  KernelValue k;
  k.method = KernelMethod::spectral;
  k.amplitude = parts.j0 + p.beta * parts.j_beta +
                detail::kI * p.alpha / (b.mass * b.omega * b.hbar) * s32 * parts.m_sum +
                p.beta * b.mass * b.hbar * b.omega * parts.n_sum;
  k.meta["truncation_n"] = std::to_string(N);
  k.meta["tail_estimate"] = std::to_string(parts.tail);
  return k;
}

// ------------------------------------------------------------ tilde factors

/// Closed forms of the resummed spectral pieces: kernel =
/// sqrt(mw/2 pi i hbar sin wT) e^{(i/hbar)S0} [J + (i alpha/(m w hbar))
/// (m w hbar/2)^{3/2}(M1 + M2) + beta m hbar w (N1 + N2)].
struct TildeFactors {
  cplx J{}, M1{}, M2{}, N1{}, N2{};
};

inline TildeFactors tilde_factors(const GupParams& p, const HermiteBasis& b, const Boundary& bd,
                                  cplx T) {
  check_basis(b);
  detail::check_caustic_c(b.omega, T);
  const double m = b.mass, w = b.omega, hb = b.hbar;
  const double q0 = bd.q0, qf = bd.qf;
  const double q02 = q0 * q0, qf2 = qf * qf, qq = q0 * qf;
  const cplx wT = w * T;
  const cplx s1 = std::sin(wT), c1 = std::cos(wT);
  const cplx s2 = std::sin(2.0 * wT), c2 = std::cos(2.0 * wT);
  const cplx s3 = std::sin(3.0 * wT), c3 = std::cos(3.0 * wT);
  const cplx sh = std::sin(wT / 2.0), ch = std::cos(wT / 2.0);
  const cplx s32h = std::sin(1.5 * wT);
  const cplx I = detail::kI;

  TildeFactors f;
  f.J = 1.0 - 3.0 * I * p.beta * m * w * w * T / (8.0 * hb * s1 * s1 * s1 * s1) *
                  (-3.0 * I * hb * m * w * (q02 + qf2) * s2 +
                   m * m * w * w * std::pow(q02 + qf2 - 2.0 * qq * c1, 2) +
                   4.0 * I * hb * m * w * s1 * (2.0 + c2) * qq - hb * hb * s1 * s1 * (2.0 + c2));
  // J is assembled here with its beta coupling folded in; strip to the bare
  // factor when beta = 0 semantics are wanted — kept as the paper groups it.

  // sign of the first odd factor flipped relative to the source display; the
  // spectral-sum cross-check fixes the orientation
  f.M1 = -(1.0 / 3.0) * std::sqrt(m * w / (2.0 * hb)) * s32h / (hb * s1 * s1 * sh) * (q0 - qf) *
         (-m * w * (q02 + 4.0 * qq + qf2) + 2.0 * m * w * (q02 + qq + qf2) * c1 -
          3.0 * I * hb * s1);
  f.M2 = -(3.0 * std::sqrt(2.0) / (8.0 * hb)) * std::sqrt(m * w / hb) * (q0 - qf) /
         (sh * sh * ch * ch) *
         (-I * hb * s2 + m * w * (q02 - 2.0 * qq * c1 + qf2) - I * hb * s1);
  f.N1 = -I / (8.0 * hb * hb * s1 * s1 * s1) *
         (-4.0 * m * m * w * w * qq * (q02 + qf2) * (3.0 + c2) + 3.0 * hb * hb * (c3 - c1) +
          4.0 * m * w * c1 * (m * w * (q02 * q02 + 6.0 * q02 * qf2 + qf2 * qf2) +
                              12.0 * I * hb * qq * s1) -
          3.0 * I * hb * m * w * (q02 + qf2) * (5.0 * s1 + s3));
  f.N2 = -I * c1 / (16.0 * hb * hb * s1 * s1 * s1) *
         (12.0 * m * m * w * w * q02 * qf2 - 3.0 * hb * hb * (1.0 - c2) +
          2.0 * m * w * (m * w * c2 * (q02 * q02 + qf2 * qf2) -
                         4.0 * m * w * qq * (q02 + qf2) * c1 -
                         6.0 * I * hb * s1 * ((q02 + qf2) * c1 - 2.0 * qq)));
  return f;
}

/// Kernel assembled from the tilde factors (same first-order content as
/// spectral_kernel, in closed form).
inline KernelValue ho_kernel_tilde(const GupParams& p, const HermiteBasis& b, const Boundary& bd,
                                   cplx T) {
  const auto f = tilde_factors(p, b, bd, T);
  const double s32 = std::pow(b.mass * b.omega * b.hbar / 2.0, 1.5);
  const cplx pref =
      detail::prefactor_sqrt(b.mass * b.omega / (2.0 * M_PI * b.hbar * std::sin(b.omega * T)));
  const cplx s0 = detail::ho_s0_c(bd.q0, bd.qf, T, b.omega, b.mass);
  KernelValue k;
  k.method = KernelMethod::spectral;
  k.amplitude = pref * std::exp(detail::kI / b.hbar * s0) *
                (f.J + detail::kI * p.alpha / (b.mass * b.omega * b.hbar) * s32 * (f.M1 + f.M2) +
                 p.beta * b.mass * b.hbar * b.omega * (f.N1 + f.N2));
  k.meta["route"] = "closed-form resummation";
  return k;
}

} // namespace gup
