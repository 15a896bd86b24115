#pragma once

// Time-sliced and Monte Carlo realizations of the propagator: the analytic
// single-slice amplitude from the Gaussian-moment evaluation of the momentum
// integral, iterated quadrature for a few Euclidean slices, and a seeded
// Brownian-bridge reweighting estimator for the deformed/undeformed kernel
// ratio.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "gup/classical.hpp"
#include "gup/errors.hpp"
#include "gup/kernels.hpp"
#include "gup/numerics.hpp"
#include "gup/params.hpp"

namespace gup {

/// Discretization of the total propagation time into equal slices.
struct SliceConfig {
  int n_slices = 1;
  double tau = 1.0;       // time per slice (Euclidean for n_slices >= 2)
  double q_extent = 0.0;  // half-width of the intermediate integration window;
                          // 0 = auto (8 sqrt(hbar tau_total / m))
  int quad_points = 64;
};

struct McEstimate {
  cplx mean{};
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Single-slice amplitude over complex slice time (real time: tau_c = tau;
// Euclidean: tau_c = -i tau). First-order bracket and exponent from the
// moment expansion of the momentum integral.
inline cplx slice_amplitude_c(double q_from, double q_to, cplx tau, const GupParams& p,
                              const Potential& potential) {
  const double dq = q_to - q_from;
  const double a = p.alpha, be = p.beta, m = p.mass, hb = p.hbar;
  const cplx pref = prefactor_sqrt(m / (2.0 * M_PI * hb * tau));
  const cplx bracket = 1.0 + 3.0 * a * m * dq / tau + 3.0 * kI * be * hb * m / tau -
                       6.0 * kI * a * a * hb * m / tau -
                       6.0 * m * m * be * dq * dq / (tau * tau) +
                       19.5 * a * a * m * m * dq * dq / (tau * tau);
  const double v = potential ? potential(q_from) : 0.0;
  const cplx expo = kI * m * dq * dq / (2.0 * hb * tau) - kI / hb * tau * v +
                    kI * a * m * m * dq * dq * dq / (hb * tau * tau) -
                    kI * be * m * m * m * dq * dq * dq * dq / (hb * tau * tau * tau) +
                    4.0 * kI * a * a * m * m * m * dq * dq * dq * dq / (hb * tau * tau * tau);
  return pref * bracket * std::exp(expo);
}

} // namespace detail

/// Analytic short-time propagator for one real-time slice.
inline cplx single_slice_propagator(double q_from, double q_to, double tau, const GupParams& p,
                                    const Potential& potential = {}) {
  if (!(tau > 0.0)) throw physics_error("nonpositive_time", "slice time must be positive");
  return detail::slice_amplitude_c(q_from, q_to, cplx(tau), p, potential);
}

/// Euclidean continuation of the single-slice propagator (tau > 0).
inline cplx single_slice_propagator_euclidean(double q_from, double q_to, double tau,
                                              const GupParams& p,
                                              const Potential& potential = {}) {
  if (!(tau > 0.0)) throw physics_error("nonpositive_time", "slice time must be positive");
  return detail::slice_amplitude_c(q_from, q_to, cplx(0.0, -tau), p, potential);
}

/// Euclidean kernel by iterated Gauss-Legendre integration over the
/// intermediate positions; quad_points is doubled until the value moves by
/// less than 1e-6 relative.
inline KernelValue sliced_kernel_quadrature(const Boundary& b, const SliceConfig& cfg,
                                            const GupParams& p, const Potential& potential = {}) {
  if (cfg.n_slices < 1 || cfg.n_slices > 3)
    throw physics_error("bad_slices", "quadrature path supports 1 to 3 slices");
  if (!(cfg.tau > 0.0)) throw physics_error("nonpositive_time", "slice time must be positive");
  const double tau_total = cfg.n_slices * cfg.tau;
  const double extent =
      cfg.q_extent > 0.0 ? cfg.q_extent : 8.0 * std::sqrt(p.hbar * tau_total / p.mass);

  auto slice = [&](double qa, double qb) {
    return detail::slice_amplitude_c(qa, qb, cplx(0.0, -cfg.tau), p, potential);
  };
  auto center = [&](int j) { return b.q0 + (b.qf - b.q0) * double(j) / cfg.n_slices; };

  auto evaluate = [&](int points) -> cplx {
    if (cfg.n_slices == 1) return slice(b.q0, b.qf);
    const auto rule = gauss_rule(QuadKind::legendre, points);
    if (cfg.n_slices == 2) {
      auto f = [&](double q1) { return slice(b.q0, q1) * slice(q1, b.qf); };
      return rule.integrate(f, center(1) - extent, center(1) + extent);
    }
    auto inner = [&](double q1) {
      auto f2 = [&](double q2) { return slice(q1, q2) * slice(q2, b.qf); };
      return slice(b.q0, q1) * rule.integrate(f2, center(2) - extent, center(2) + extent);
    };
    return rule.integrate(inner, center(1) - extent, center(1) + extent);
  };

  cplx value = evaluate(cfg.quad_points);
  int points = cfg.quad_points;
  bool converged = cfg.n_slices == 1;
  while (!converged && points <= 256) {
    const cplx refined = evaluate(points * 2);
    converged = std::abs(refined - value) <= 1e-6 * std::max(std::abs(refined), 1e-300);
    value = refined;
    points *= 2;
  }
  if (!converged)
    throw physics_error("quadrature", "sliced kernel did not converge under point doubling");
  KernelValue k;
  k.method = KernelMethod::lattice;
  k.amplitude = value;
  k.meta["n_slices"] = std::to_string(cfg.n_slices);
  k.meta["quad_points"] = std::to_string(points);
  return k;
}

/// Euclidean configuration action on a sampled path (uniform grid):
///   sum_j tau [ (m/2) v^2 (1 + 2 i alpha m v - 8 alpha^2 m^2 v^2
///               + 2 beta m^2 v^2) + V(q_j) ],  v = (q_{j+1} - q_j)/tau.
/// Complex-valued: the odd alpha term picks up an i under t -> -i tau.
inline cplx euclidean_action(const std::vector<double>& path, double tau, const GupParams& p,
                             const Potential& potential = {}) {
  if (path.size() < 2) throw physics_error("empty_grid", "need at least two path points");
  if (!(tau > 0.0)) throw physics_error("nonpositive_time", "slice time must be positive");
  cplx s = 0.0;
  for (size_t j = 0; j + 1 < path.size(); ++j) {
    const double v = (path[j + 1] - path[j]) / tau;
    const double mv = p.mass * v;
    const cplx factor = 1.0 + 2.0 * detail::kI * p.alpha * mv -
                        (8.0 * p.alpha * p.alpha - 2.0 * p.beta) * mv * mv;
    s += tau * (0.5 * p.mass * v * v * factor + (potential ? potential(path[j]) : 0.0));
  }
  return s;
}

// ------------------------------------------------------------- Monte Carlo

namespace detail {

// counter-based generator: one splitmix64 pass to seed the stream, one per
// counter value; no state shared between streams
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct CounterRng {
  std::uint64_t stream_key;
  std::uint64_t counter = 0;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : stream_key(splitmix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

  double uniform() { // (0, 1)
    const std::uint64_t u = splitmix64(stream_key + 0xD1B54A32D192ED03ull * (++counter));
    return (double(u >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }
  double gaussian() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

} // namespace detail

/// Kernel ratio K_deformed / K_free by reweighting Brownian-bridge paths
/// pinned at (q0, qf): per path, the product of per-slice deformation
/// corrections linearized to first order in (alpha, alpha^2, beta), times
/// e^{-(tau/hbar) sum V}. Deterministic per seed; errors from 20 batch means.
inline McEstimate euclidean_mc_kernel(const Boundary& b, const SliceConfig& cfg,
                                      const GupParams& p, const Potential& potential,
                                      long n_samples, std::uint64_t seed, int n_threads = 1) {
  if (cfg.n_slices < 2) throw physics_error("bad_slices", "bridge sampling needs >= 2 slices");
  if (n_samples < 20) throw physics_error("bad_samples", "need at least 20 samples");
  const int n = cfg.n_slices;
  const double eps = cfg.tau;
  const double m = p.mass, hb = p.hbar, a = p.alpha, be = p.beta;

  constexpr int kBatches = 20;
  const long per_batch = n_samples / kBatches;
  std::vector<cplx> batch_mean(kBatches, 0.0);

  auto run_batch = [&](int batch) {
    detail::CounterRng rng(seed, std::uint64_t(batch));
    cplx acc = 0.0;
    for (long s = 0; s < per_batch; ++s) {
      // sequential conditional sampling of the pinned free path
      double q = b.q0;
      cplx corr = 0.0;
      double vpot = 0.0;
      for (int j = 0; j < n; ++j) {
        double q_next;
        if (j == n - 1) {
          q_next = b.qf;
        } else {
          const int left = n - j;
          const double mean = q + (b.qf - q) / left;
          const double var = hb / m * eps * double(left - 1) / double(left);
          q_next = mean + std::sqrt(var) * rng.gaussian();
        }
        const double v = (q_next - q) / eps;
        const double mv2 = m * v * v;
        // first-order per-slice ratio corrections (bracket + exponent,
        // continued to Euclidean time)
        const cplx dr = be * (-3.0 * hb * m / eps + 6.0 * m * mv2 - m * mv2 * mv2 * eps / hb) +
                        detail::kI * a * (3.0 * m * v - mv2 * m * v * eps / hb) +
                        a * a * (6.0 * hb * m / eps - 19.5 * m * mv2 +
                                 4.0 * m * mv2 * mv2 * eps / hb);
        // Euclidean kinetic factor; non-positive means the sampled velocity
        // reached the deformation's velocity-bound scale
        if (1.0 + (2.0 * be - 8.0 * a * a) * mv2 * m <= 0.0)
          throw physics_error("stability",
                              "sampled velocity at the kinetic-factor zero; reweighting unbounded");
        corr += dr;
        if (potential) vpot += potential(q);
        q = q_next;
      }
      acc += (1.0 + corr) * (potential ? std::exp(-eps / hb * vpot) : 1.0);
    }
    batch_mean[batch] = acc / double(per_batch);
  };

  // batches own independent counter streams, so the result is identical for
  // any thread count
  n_threads = std::max(1, std::min(n_threads, kBatches));
  if (n_threads == 1) {
    for (int batch = 0; batch < kBatches; ++batch) run_batch(batch);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        try {
          for (int batch = next++; batch < kBatches; batch = next++) run_batch(batch);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failed) std::rethrow_exception(failure);
  }

  McEstimate est;
  est.n_samples = per_batch * kBatches;
  est.seed = seed;
  for (auto& bm : batch_mean) est.mean += bm;
  est.mean /= double(kBatches);
  double var = 0.0;
  for (auto& bm : batch_mean) var += std::norm(bm - est.mean);
  est.std_error = std::sqrt(var / (kBatches * (kBatches - 1.0)));
  return est;
}

} // namespace gup
