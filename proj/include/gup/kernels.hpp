#pragma once

// Semiclassical propagation kernels for the free particle and the harmonic
// oscillator, to first order in the deformation couplings. Everything is
// written over complex time so the Euclidean continuation T -> -i tau is the
// same code path; sqrt(1/i) is fixed to the principal branch e^{-i pi/4}.

#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "gup/classical.hpp"
#include "gup/errors.hpp"
#include "gup/params.hpp"

namespace gup {

using cplx = std::complex<double>;

enum class KernelMethod { semiclassical, spectral, lattice };

struct KernelValue {
  cplx amplitude{};
  KernelMethod method = KernelMethod::semiclassical;
  std::map<std::string, std::string> meta;
};

namespace detail {

inline const cplx kI{0.0, 1.0};
// sqrt(1/i), principal branch
inline const cplx kInvSqrtI = std::exp(cplx{0.0, -M_PI / 4.0});

/// e^{-i pi/4} sqrt(x) with the principal complex square root; for x real
/// positive this is the standard sqrt(x/i) kernel prefactor.
inline cplx prefactor_sqrt(cplx x) { return kInvSqrtI * std::sqrt(x); }

inline void check_caustic_c(double omega, cplx T) {
  if (std::abs(std::sin(omega * T)) < caustic_tolerance)
    throw physics_error("caustic", "sin(omega T) too close to zero; closed forms are singular");
}

// ---- complex-time classical action pieces (shared with the real-time API)

inline cplx free_action_total_c(double q0, double qf, cplx T, const GupParams& p) {
  const double dq = qf - q0;
  const cplx v = dq / T;
  const cplx mv = p.mass * v;
  return 0.5 * p.mass * dq * dq / T *
         (1.0 + 2.0 * p.alpha * mv + (8.0 * p.alpha * p.alpha - 2.0 * p.beta) * mv * mv);
}

inline cplx ho_s0_c(double q0, double qf, cplx T, double w, double m) {
  const cplx s1 = std::sin(w * T), c1 = std::cos(w * T);
  return 0.5 * m * w / s1 * ((q0 * q0 + qf * qf) * c1 - 2.0 * q0 * qf);
}

inline cplx ho_salpha_c(double q0, double qf, cplx T, double w, double m, double alpha) {
  const cplx s1 = std::sin(w * T), c1 = std::cos(w * T), c2 = std::cos(2.0 * w * T);
  const double q02 = q0 * q0, qf2 = qf * qf, qq = q0 * qf;
  return -(alpha / 6.0) * m * m * w * w * (q0 - qf) / (s1 * s1) *
         ((q02 + qq + qf2) * c2 - 12.0 * qq * c1 - qq + 5.0 * (q02 + qf2));
}

/// Fluctuation-route closed form of the beta action piece (identical to the
/// trajectory-route expression; the identity is tested).
inline cplx ho_sbeta_c(double q0, double qf, cplx T, double w, double m, double beta) {
  const cplx wT = w * T;
  const cplx s1 = std::sin(wT), s2 = std::sin(2.0 * wT), s3 = std::sin(3.0 * wT),
             s4 = std::sin(4.0 * wT);
  const cplx c1 = std::cos(wT), c2 = std::cos(2.0 * wT);
  const double q02 = q0 * q0, qf2 = qf * qf, qq = q0 * qf;
  const cplx csc4 = 1.0 / (s1 * s1 * s1 * s1);
  return -(beta * m * m * m * w * w * w / 32.0) * csc4 *
         ((12.0 * wT + 8.0 * s2 + s4) * (q02 * q02 + qf2 * qf2) -
          4.0 * (12.0 * wT * c1 + 11.0 * s1 + 3.0 * s3) * qq * (q02 + qf2) +
          12.0 * (4.0 * wT + 2.0 * wT * c2 + 5.0 * s2) * qq * qq);
}

inline cplx ho_f_c(double q0, double qf, cplx T, double w, double m) {
  const cplx s1 = std::sin(w * T), s2 = std::sin(2.0 * w * T);
  return -(q0 - qf) * m * w / (s1 * s1) * (s1 + s2);
}

inline cplx ho_g_c(double q0, double qf, cplx T, double w, double m, double hbar) {
  const cplx wT = w * T;
  const cplx s1 = std::sin(wT), c1 = std::cos(wT), c2 = std::cos(2.0 * wT);
  const double q02 = q0 * q0, qf2 = qf * qf, qq = q0 * qf;
  const cplx term1 = 3.0 * kI * hbar * m * w / (8.0 * s1 * s1) *
                     (2.0 * wT + 5.0 * s1 * c1 + wT * c2);
  const cplx term2 = -3.0 * m * m * w * w / (8.0 * s1 * s1 * s1) *
                     (2.0 * wT * (3.0 * c1 * (q02 + qf2) - 2.0 * (2.0 + c2) * qq) +
                      10.0 * s1 * (q02 + qf2 - 2.0 * qq * c1) -
                      6.0 * s1 * s1 * s1 * (q02 + qf2));
  return term1 + term2;
}

inline cplx free_bracket_c(double dq, cplx T, const GupParams& p) {
  const double a = p.alpha, be = p.beta, m = p.mass, hb = p.hbar;
  return 1.0 + 3.0 * a * m * dq / T + 3.0 * kI * be * hb * m / T -
         6.0 * kI * a * a * hb * m / T -
         6.0 * (a * a / 2.0 + be) * m * m * dq * dq / (T * T) +
         22.5 * a * a * m * m * dq * dq / (T * T);
}

inline cplx free_kernel_c(double q0, double qf, cplx T, const GupParams& p) {
  const cplx pref = prefactor_sqrt(p.mass / (2.0 * M_PI * p.hbar * T));
  return pref * free_bracket_c(qf - q0, T, p) *
         std::exp(kI / p.hbar * free_action_total_c(q0, qf, T, p));
}

inline cplx ho_kernel_c(double q0, double qf, cplx T, double w, const GupParams& p) {
  check_caustic_c(w, T);
  const double m = p.mass, hb = p.hbar;
  const cplx pref = prefactor_sqrt(m * w / (2.0 * M_PI * hb * std::sin(w * T)));
  const cplx bracket = 1.0 + p.alpha * ho_f_c(q0, qf, T, w, m) +
                       p.beta * ho_g_c(q0, qf, T, w, m, hb);
  const cplx action = ho_s0_c(q0, qf, T, w, m) + ho_salpha_c(q0, qf, T, w, m, p.alpha) +
                      ho_sbeta_c(q0, qf, T, w, m, p.beta);
  return pref * bracket * std::exp(kI / hb * action);
}

} // namespace detail

// ------------------------------------------------------------ free particle

/// Fluctuation prefactor of the free kernel: sqrt(m/2 pi i hbar T) times the
/// first-order deformation bracket.
inline cplx free_fluctuation(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  if (b.omega != 0.0) throw physics_error("not_free", "free kernel requires omega = 0");
  return detail::prefactor_sqrt(p.mass / (2.0 * M_PI * p.hbar * cplx(b.T))) *
         detail::free_bracket_c(b.qf - b.q0, cplx(b.T), p);
}

inline KernelValue free_kernel(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  if (b.omega != 0.0) throw physics_error("not_free", "free kernel requires omega = 0");
  KernelValue k;
  k.method = KernelMethod::semiclassical;
  k.amplitude = detail::free_kernel_c(b.q0, b.qf, cplx(b.T), p);
  k.meta["truncation"] = "O(alpha^2, beta)";
  return k;
}

/// Euclidean continuation T -> -i tau of the free kernel.
inline KernelValue free_kernel_euclidean(const Boundary& b, double tau, const GupParams& p) {
  if (!(tau > 0.0)) throw physics_error("nonpositive_time", "tau must be positive");
  KernelValue k;
  k.method = KernelMethod::semiclassical;
  k.amplitude = detail::free_kernel_c(b.q0, b.qf, cplx(0.0, -tau), p);
  k.meta["euclidean_tau"] = std::to_string(tau);
  return k;
}

// ------------------------------------------------------ harmonic oscillator

/// Odd fluctuation function multiplying alpha in the HO kernel bracket.
inline double ho_fluctuation_f(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  check_caustic(b);
  return detail::ho_f_c(b.q0, b.qf, cplx(b.T), b.omega, p.mass).real();
}

/// Complex fluctuation function multiplying beta in the HO kernel bracket.
inline cplx ho_fluctuation_g(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  check_caustic(b);
  return detail::ho_g_c(b.q0, b.qf, cplx(b.T), b.omega, p.mass, p.hbar);
}

/// HO kernel sqrt(m w / 2 pi i hbar sin wT) [1 + alpha f + beta g]
/// e^{(i/hbar)(S0 + S_alpha + S_beta)}, truncated at first order in the
/// couplings (the fluctuation bracket carries no alpha^2 terms).
inline KernelValue ho_kernel_semiclassical(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  check_caustic(b);
  KernelValue k;
  k.method = KernelMethod::semiclassical;
  k.amplitude = detail::ho_kernel_c(b.q0, b.qf, cplx(b.T), b.omega, p);
  k.meta["truncation"] = "O(alpha, beta)";
  const double sin_wt = std::abs(std::sin(b.omega * b.T));
  if (sin_wt < 1e-3) k.meta["caustic_proximity"] = std::to_string(sin_wt);
  return k;
}

/// Euclidean continuation T -> -i tau of the HO semiclassical kernel.
inline KernelValue ho_kernel_semiclassical_euclidean(const Boundary& b, double tau,
                                                     const GupParams& p) {
  if (!(tau > 0.0)) throw physics_error("nonpositive_time", "tau must be positive");
  KernelValue k;
  k.method = KernelMethod::semiclassical;
  k.amplitude = detail::ho_kernel_c(b.q0, b.qf, cplx(0.0, -tau), b.omega, p);
  k.meta["euclidean_tau"] = std::to_string(tau);
  return k;
}

} // namespace gup
