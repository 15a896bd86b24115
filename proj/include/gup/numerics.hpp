#pragma once

// Shared numerical plumbing: fixed-step RK4, bisection, Gauss-Legendre and
// Gauss-Hermite rules, and a cyclic-Jacobi symmetric eigensolver. Everything
// here is deterministic and allocation-simple; desk-scale sizes only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "gup/errors.hpp"

namespace gup {

using State = std::vector<double>;

/// Classical fixed-step fourth-order Runge-Kutta. Returns the full (t, state)
/// trajectory including both endpoints.
inline std::vector<std::pair<double, State>>
rk4_integrate(const std::function<State(double, const State&)>& f, State y0, double t0,
              double t1, int steps) {
  if (steps < 1) throw physics_error("bad_steps", "rk4 needs steps >= 1");
  const double h = (t1 - t0) / steps;
  std::vector<std::pair<double, State>> out;
  out.reserve(steps + 1);
  out.emplace_back(t0, y0);
  State y = std::move(y0);
  auto axpy = [](const State& a, double c, const State& b) {
    State r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    State k1 = f(t, y);
    State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    State k4 = f(t + h, axpy(y, h, k3));
    for (size_t i = 0; i < y.size(); ++i) {
      const double d = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
      if (!std::isfinite(d)) throw physics_error("nonfinite_derivative", "rk4 derivative blew up");
      y[i] += h * d;
    }
    out.emplace_back(t + h, y);
  }
  return out;
}

/// Bisection root finding on a bracketing interval.
inline double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                          double tol) {
  double flo = g(lo), fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw physics_error("no_bracket", "bisection interval does not bracket a root");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

enum class QuadKind { legendre, hermite };

/// Nodes strictly increasing; weights sum to 2 (legendre, on [-1,1]) or
/// sqrt(pi) (hermite, weight e^{-x^2} on the real line).
struct QuadratureRule {
  QuadKind kind;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Integrate f over [a,b] (legendre) by affine transform of the nodes.
  template <typename F>
  auto integrate(F&& f, double a, double b) const {
    using R = decltype(f(0.0));
    R acc{};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t i = 0; i < nodes.size(); ++i) acc += R(weights[i]) * f(mid + half * nodes[i]);
    return R(half) * acc;
  }
};

namespace detail {

// Orthonormal Legendre value and derivative at x, plus the previous value,
// via the three-term recurrence.
inline void legendre_eval(int n, double x, double& pn, double& pn1, double& dpn) {
  double p0 = std::sqrt(0.5);          // normalized P_0 on [-1,1]
  double p1 = std::sqrt(1.5) * x;      // normalized P_1
  for (int k = 1; k < n; ++k) {
    const double a = std::sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0)) / (k + 1.0);
    const double b = (k / (k + 1.0)) * std::sqrt((2.0 * k + 3.0) / (2.0 * k - 1.0));
    const double p2 = a * x * p1 - b * p0;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
  // derivative identity for normalized Legendre
  dpn = n * (x * p1 - std::sqrt((2.0 * n + 1.0) / (2.0 * n - 1.0)) * p0) / (x * x - 1.0);
}

// Orthonormal Hermite functions h_k (weight e^{-x^2}) value at x.
inline void hermite_eval(int n, double x, double& hn, double& hn1) {
  double h0 = std::pow(M_PI, -0.25);
  double h1 = std::sqrt(2.0) * x * h0;
  if (n == 0) {
    hn = h0;
    hn1 = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double h2 = x * std::sqrt(2.0 / (k + 1.0)) * h1 - std::sqrt(double(k) / (k + 1.0)) * h0;
    h0 = h1;
    h1 = h2;
  }
  hn = h1;
  hn1 = h0;
}

// Christoffel weight 1 / sum_{k<n} p_k(x)^2 for an orthonormal family.
template <typename Eval>
inline double christoffel_weight(int n, double x, Eval&& eval_k) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = eval_k(k, x);
    s += v * v;
  }
  return 1.0 / s;
}

} // namespace detail

/// Gauss rules by Newton iteration on the orthonormal recurrences, weights by
/// the Christoffel-number formula. order in [2, 256].
inline QuadratureRule gauss_rule(QuadKind kind, int order) {
  if (order < 2 || order > 256) throw physics_error("bad_order", "quadrature order must be in [2,256]");
  QuadratureRule rule;
  rule.kind = kind;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  if (kind == QuadKind::legendre) {
    for (int i = 0; i < order; ++i) {
      // Chebyshev-like initial guess, refined by Newton.
      double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
      for (int it = 0; it < 100; ++it) {
        double pn, pn1, dpn;
        detail::legendre_eval(order, x, pn, pn1, dpn);
        const double dx = pn / dpn;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      rule.nodes[i] = x;
    }
  } else {
    // Roots come in +/- pairs; compute the positive half from asymptotic
    // guesses marching inward, then mirror.
    const int half = (order + 1) / 2;
    std::vector<double> pos(half);
    for (int i = 0; i < half; ++i) {
      double x;
      if (i == 0) {
        x = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
      } else if (i == 1) {
        x = pos[0] - 1.14 * std::pow(double(order), 0.426) / pos[0];
      } else if (i == 2) {
        x = 1.86 * pos[1] - 0.86 * pos[0];
      } else if (i == 3) {
        x = 1.91 * pos[2] - 0.91 * pos[1];
      } else {
        x = 2.0 * pos[i - 1] - pos[i - 2];
      }
      for (int it = 0; it < 200; ++it) {
        double hn, hn1;
        detail::hermite_eval(order, x, hn, hn1);
        const double dhn = std::sqrt(2.0 * order) * hn1; // derivative identity
        const double dx = hn / dhn;
        x -= dx;
        if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
      }
      pos[i] = x;
    }
    for (int i = 0; i < half; ++i) {
      rule.nodes[i] = pos[i];
      rule.nodes[order - 1 - i] = -pos[i];
    }
    if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
  }

  for (int i = 0; i < order; ++i) {
    const double x = rule.nodes[i];
    if (kind == QuadKind::legendre) {
      rule.weights[i] = detail::christoffel_weight(order, x, [](int k, double xx) {
        double pn, pn1, dpn;
        detail::legendre_eval(k == 0 ? 1 : k, xx, pn, pn1, dpn);
        return k == 0 ? std::sqrt(0.5) : pn;
      });
    } else {
      rule.weights[i] = detail::christoffel_weight(order, x, [](int k, double xx) {
        double hn, hn1;
        detail::hermite_eval(k, xx, hn, hn1);
        return hn;
      });
    }
  }
  // sort ascending (hermite guesses start from the largest root)
  std::vector<size_t> idx(order);
  for (int i = 0; i < order; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted;
  sorted.kind = kind;
  for (size_t j : idx) {
    sorted.nodes.push_back(rule.nodes[j]);
    sorted.weights.push_back(rule.weights[j]);
  }
  return sorted;
}

using Matrix = std::vector<std::vector<double>>;

/// Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi
/// rotations on a private copy; iterates until the off-diagonal Frobenius
/// norm drops below 1e-13 * ||A||_F.
inline std::vector<double> symmetric_eigen(const Matrix& a_in) {
  const size_t n = a_in.size();
  double anorm = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (a_in[i].size() != n) throw physics_error("not_square", "eigensolver needs a square matrix");
    for (size_t j = 0; j < n; ++j) anorm += a_in[i][j] * a_in[i][j];
  }
  anorm = std::sqrt(anorm);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(a_in[i][j] - a_in[j][i]) > 1e-12 * std::max(1.0, anorm))
        throw physics_error("not_symmetric", "eigensolver needs a symmetric matrix");

  Matrix a = a_in;
  const double stop = 1e-13 * std::max(anorm, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) off += 2.0 * a[i][j] * a[i][j];
    if (std::sqrt(off) < stop) break;
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

} // namespace gup
