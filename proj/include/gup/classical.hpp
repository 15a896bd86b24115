#pragma once

// Classical mechanics for the deformed Lagrangian
//   L = (m/2) qdot^2 (1 + 2 alpha m qdot + 8 alpha^2 m^2 qdot^2
//                       - 2 beta m^2 qdot^2) - V(q):
// closed-form free and harmonic-oscillator trajectories and actions, the
// perturbative HO path to second order in the deformation, and the numerical
// oracles (shooting BVP, Gauss-Legendre action quadrature) that check them.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gup/errors.hpp"
#include "gup/numerics.hpp"
#include "gup/params.hpp"

namespace gup {

inline constexpr double caustic_tolerance = 1e-6;

using Potential = std::function<double(double)>;

/// Endpoint data for a propagation problem. omega = 0 means free particle.
struct Boundary {
  double q0 = 0.0;
  double qf = 0.0;
  double T = 1.0;
  double omega = 0.0;
};

inline void check_boundary(const Boundary& b) {
  if (!(b.T > 0.0)) throw physics_error("nonpositive_time", "T must be positive");
  if (b.omega < 0.0) throw physics_error("negative_omega", "omega must be >= 0");
}

inline void check_caustic(const Boundary& b) {
  if (std::abs(std::sin(b.omega * b.T)) < caustic_tolerance)
    throw physics_error("caustic", "sin(omega T) too close to zero; closed forms are singular");
}

// ------------------------------------------------------------ trig series

/// One (a + b t) * {cos,sin}(k omega t) term; k = 0 covers polynomial pieces
/// (the free-particle line is a single k = 0 cosine term).
struct TrigTerm {
  double a = 0.0;
  double b = 0.0;
  int k = 0;
  bool is_sin = false;
};

/// Finite sum of TrigTerms with analytic first and second derivatives.
struct TrigSeries {
  double omega = 0.0;
  std::vector<TrigTerm> terms;

  void add(double a, double b, int k, bool is_sin) {
    if (a != 0.0 || b != 0.0) terms.push_back({a, b, k, is_sin});
  }
  double eval(double t) const {
    double s = 0.0;
    for (auto& tm : terms) {
      const double w = tm.k * omega;
      s += (tm.a + tm.b * t) * (tm.is_sin ? std::sin(w * t) : std::cos(w * t));
    }
    return s;
  }
  double d1(double t) const {
    double s = 0.0;
    for (auto& tm : terms) {
      const double w = tm.k * omega;
      const double sn = std::sin(w * t), cs = std::cos(w * t);
      if (tm.is_sin)
        s += tm.b * sn + w * (tm.a + tm.b * t) * cs;
      else
        s += tm.b * cs - w * (tm.a + tm.b * t) * sn;
    }
    return s;
  }
  double d2(double t) const {
    double s = 0.0;
    for (auto& tm : terms) {
      const double w = tm.k * omega;
      const double sn = std::sin(w * t), cs = std::cos(w * t);
      if (tm.is_sin)
        s += 2.0 * tm.b * w * cs - w * w * (tm.a + tm.b * t) * sn;
      else
        s += -2.0 * tm.b * w * sn - w * w * (tm.a + tm.b * t) * cs;
    }
    return s;
  }
};

/// Integration constants of the perturbative HO path, fixed by the endpoint
/// conditions at t = 0 and t = T order by order.
struct HOTrajectoryCoefficients {
  double A = 0, B = 0, C1 = 0, C2 = 0, C3 = 0, C4 = 0, C5 = 0, C6 = 0;
};

/// Classical path. Closed-form cases carry the four perturbative pieces
/// (weights 1, alpha, alpha^2, beta); the shooting oracle carries a sampled
/// grid with C1 Hermite interpolation instead.
struct Trajectory {
  Boundary boundary;
  GupParams params;
  bool has_closed_form = true;
  std::array<TrigSeries, 4> pieces{}; // q(0), q(1), q(2), q(3)

  struct GridPoint {
    double t, q, qdot;
  };
  std::vector<GridPoint> grid;
  std::vector<std::string> warnings;

  double position(double t) const {
    if (has_closed_form) {
      const double a = params.alpha, be = params.beta;
      return pieces[0].eval(t) + a * pieces[1].eval(t) + a * a * pieces[2].eval(t) +
             be * pieces[3].eval(t);
    }
    return interp(t, false);
  }
  double velocity(double t) const {
    if (has_closed_form) {
      const double a = params.alpha, be = params.beta;
      return pieces[0].d1(t) + a * pieces[1].d1(t) + a * a * pieces[2].d1(t) +
             be * pieces[3].d1(t);
    }
    return interp(t, true);
  }
  double acceleration(double t) const {
    if (!has_closed_form)
      throw physics_error("no_closed_form", "sampled trajectories are only C1");
    const double a = params.alpha, be = params.beta;
    return pieces[0].d2(t) + a * pieces[1].d2(t) + a * a * pieces[2].d2(t) +
           be * pieces[3].d2(t);
  }

private:
  // cubic Hermite on the (q, qdot) grid
  double interp(double t, bool want_velocity) const {
    if (grid.size() < 2) throw physics_error("empty_grid", "trajectory grid not populated");
    const double t0 = grid.front().t, t1 = grid.back().t;
    const double h = (t1 - t0) / double(grid.size() - 1);
    size_t i = std::min(grid.size() - 2, size_t(std::max(0.0, (t - t0) / h)));
    const auto &l = grid[i], &r = grid[i + 1];
    const double u = (t - l.t) / (r.t - l.t), du = 1.0 / (r.t - l.t);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    if (!want_velocity)
      return h00 * l.q + h10 * (r.t - l.t) * l.qdot + h01 * r.q + h11 * (r.t - l.t) * r.qdot;
    const double d00 = 6 * u * (u - 1), d10 = (1 - u) * (1 - 3 * u);
    const double d01 = -d00, d11 = u * (3 * u - 2);
    return du * (d00 * l.q + d01 * r.q) + d10 * l.qdot + d11 * r.qdot;
  }
};

/// Action split by deformation order; total is the sum of the four pieces.
struct ActionBreakdown {
  double s0 = 0, s_alpha = 0, s_alpha2 = 0, s_beta = 0;
  double total = 0;
};

// ------------------------------------------------------------- Lagrangian

/// L(qdot, q) with the kinetic deformation factor; V defaults to zero.
inline double gup_lagrangian(double qdot, double q, const GupParams& p,
                             const Potential& potential = {}) {
  const double mv = p.mass * qdot;
  const double factor = 1.0 + 2.0 * p.alpha * mv + (8.0 * p.alpha * p.alpha - 2.0 * p.beta) * mv * mv;
  const double v = potential ? potential(q) : 0.0;
  return 0.5 * p.mass * qdot * qdot * factor - v;
}

// ---------------------------------------------------------- free particle

inline Trajectory free_trajectory(const Boundary& b, const GupParams& p = {}) {
  check_boundary(b);
  Trajectory tr;
  tr.boundary = b;
  tr.params = p;
  const double v = (b.qf - b.q0) / b.T;
  for (auto& s : tr.pieces) s.omega = 0.0;
  tr.pieces[0].add(b.q0, v, 0, false);
  if (p.alpha != 0.0 || p.beta != 0.0) {
    try {
      if (std::abs(v) > max_free_velocity(p))
        tr.warnings.push_back("endpoint velocity exceeds the free-particle bound");
    } catch (const physics_error&) {
      // no real bound in this parameter regime; nothing to flag
    }
  }
  return tr;
}

/// Closed-form free action (m/2T) dq^2 [1 + 2 alpha m v + 8 alpha^2 m^2 v^2
/// - 2 beta m^2 v^2], v = dq/T, split by order.
inline ActionBreakdown free_action(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  const double dq = b.qf - b.q0;
  const double v = dq / b.T;
  const double mv = p.mass * v;
  ActionBreakdown s;
  s.s0 = 0.5 * p.mass * dq * dq / b.T;
  s.s_alpha = s.s0 * 2.0 * p.alpha * mv;
  s.s_alpha2 = s.s0 * 8.0 * p.alpha * p.alpha * mv * mv;
  s.s_beta = -s.s0 * 2.0 * p.beta * mv * mv;
  s.total = s.s0 + s.s_alpha + s.s_alpha2 + s.s_beta;
  return s;
}

// ------------------------------------------------------ harmonic oscillator

namespace detail {

// Non-homogeneous parts of the second- and third-order pieces (everything
// except the C cos + C sin homogeneous solution), used both to build the
// series and to fix C4, C6 from the endpoint condition at t = T.
inline TrigSeries q2_inhomogeneous(const HOTrajectoryCoefficients& c, double m, double w) {
  TrigSeries s;
  s.omega = w;
  const double A = c.A, B = c.B;
  const double m2w2 = m * m * w * w;
  s.add(3.0 * m2w2 * (A * A + B * B) * A, -3.0 * m2w2 * (A * A + B * B) * B * w, 1, false);
  s.add(-2.0 * m * w * (B * c.C1 + A * c.C2), 0.0, 2, false);
  s.add(-0.75 * m2w2 * A * (A * A - 3.0 * B * B), 0.0, 3, false);
  s.add(0.0, 3.0 * m2w2 * w * A * (A * A + B * B), 1, true);
  s.add(2.0 * m * w * (A * c.C1 - B * c.C2), 0.0, 2, true);
  s.add(0.75 * m2w2 * B * (B * B - 3.0 * A * A), 0.0, 3, true);
  return s;
}

inline TrigSeries q3_inhomogeneous(const HOTrajectoryCoefficients& c, double m, double w) {
  TrigSeries s;
  s.omega = w;
  const double A = c.A, B = c.B;
  const double m2w2 = m * m * w * w;
  s.add(-0.75 * m2w2 * (A * A + B * B) * A, 1.5 * m2w2 * (A * A + B * B) * B * w, 1, false);
  s.add(-0.375 * m2w2 * A * (A * A - 3.0 * B * B), 0.0, 3, false);
  s.add(-0.75 * m2w2 * (A * A + B * B) * B, -1.5 * m2w2 * (A * A + B * B) * A * w, 1, true);
  s.add(0.375 * m2w2 * B * (B * B - 3.0 * A * A), 0.0, 3, true);
  return s;
}

} // namespace detail

/// Integration constants from the endpoint conditions, order by order:
/// the first- and third-order non-homogeneous parts vanish at t = 0 by
/// construction; the sine coefficients C2, C4, C6 absorb the t = T values.
inline HOTrajectoryCoefficients ho_coefficients(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  check_caustic(b);
  const double m = p.mass, w = b.omega, T = b.T;
  const double sT = std::sin(w * T), cT = std::cos(w * T);
  HOTrajectoryCoefficients c;
  c.A = b.q0;
  c.B = (b.qf - b.q0 * cT) / sT;
  c.C1 = 2.0 * m * w * c.A * c.B;
  c.C2 = (2.0 * c.A * c.B * m * w * std::cos(2.0 * w * T) -
          m * w * (c.A * c.A - c.B * c.B) * std::sin(2.0 * w * T) - c.C1 * cT) /
         sT;
  c.C3 = -1.25 * m * m * w * w * c.A * c.B * c.B + 2.0 * m * w * c.A * c.C2 -
         2.25 * m * m * w * w * c.A * c.A * c.A;
  c.C4 = -(c.C3 * cT + detail::q2_inhomogeneous(c, m, w).eval(T)) / sT;
  c.C5 = 0.375 * m * m * w * w * (3.0 * c.A * c.A * c.A - c.A * c.B * c.B);
  c.C6 = -(c.C5 * cT + detail::q3_inhomogeneous(c, m, w).eval(T)) / sT;
  return c;
}

/// Perturbative HO path q = q(0) + alpha q(1) + alpha^2 q(2) + beta q(3).
inline Trajectory ho_trajectory(const Boundary& b, const GupParams& p) {
  const HOTrajectoryCoefficients c = ho_coefficients(b, p);
  const double m = p.mass, w = b.omega;
  Trajectory tr;
  tr.boundary = b;
  tr.params = p;
  for (auto& s : tr.pieces) s.omega = w;

  tr.pieces[0].add(c.A, 0.0, 1, false);
  tr.pieces[0].add(c.B, 0.0, 1, true);

  tr.pieces[1].add(c.C1, 0.0, 1, false);
  tr.pieces[1].add(c.C2, 0.0, 1, true);
  tr.pieces[1].add(m * w * (c.A * c.A - c.B * c.B), 0.0, 2, true);
  tr.pieces[1].add(-2.0 * c.A * c.B * m * w, 0.0, 2, false);

  tr.pieces[2] = detail::q2_inhomogeneous(c, m, w);
  tr.pieces[2].add(c.C3, 0.0, 1, false);
  tr.pieces[2].add(c.C4, 0.0, 1, true);

  tr.pieces[3] = detail::q3_inhomogeneous(c, m, w);
  tr.pieces[3].add(c.C5, 0.0, 1, false);
  tr.pieces[3].add(c.C6, 0.0, 1, true);
  return tr;
}

/// Residual of the full equation of motion
///   qddot (1 + 6 alpha m qdot + 48 alpha^2 m^2 qdot^2 - 12 beta m^2 qdot^2)
///   + omega^2 q
/// as a function of t (the omega^2 q term drops out for the free case).
inline std::function<double(double)> eom_residual(const Trajectory& traj, const GupParams& p) {
  const double w2 = traj.boundary.omega * traj.boundary.omega;
  return [traj, p, w2](double t) {
    const double qd = traj.velocity(t), qdd = traj.acceleration(t);
    const double mv = p.mass * qd;
    const double bracket =
        1.0 + 6.0 * p.alpha * mv + (48.0 * p.alpha * p.alpha - 12.0 * p.beta) * mv * mv;
    return qdd * bracket + w2 * traj.position(t);
  };
}

/// Closed-form HO action pieces through second order in the deformation.
inline ActionBreakdown ho_action(const Boundary& b, const GupParams& p) {
  check_boundary(b);
  check_caustic(b);
  const double m = p.mass, w = b.omega, T = b.T;
  const double q0 = b.q0, qf = b.qf;
  const double wT = w * T;
  const double s1 = std::sin(wT), c1 = std::cos(wT);
  const double s2 = std::sin(2 * wT), c2 = std::cos(2 * wT);
  const double s3 = std::sin(3 * wT), s4 = std::sin(4 * wT);
  const double csc = 1.0 / s1;
  const double q02 = q0 * q0, qf2 = qf * qf, qq = q0 * qf;

  ActionBreakdown s;
  s.s0 = 0.5 * m * w * csc * ((q02 + qf2) * c1 - 2.0 * qq);
  s.s_alpha = -(p.alpha / 6.0) * m * m * w * w * (q0 - qf) * csc * csc *
              ((q02 + qq + qf2) * c2 - 12.0 * qq * c1 - qq + 5.0 * (q02 + qf2));
  const double csc4 = csc * csc * csc * csc;
  s.s_alpha2 =
      (p.alpha * p.alpha / 16.0) * m * m * m * w * w * w * csc4 *
      ((q02 * q02 + qf2 * qf2) * s4 - 4.0 * qq * (21.0 * q02 - 20.0 * qq + 21.0 * qf2) * s1 -
       4.0 * qq * (5.0 * q02 - 4.0 * qq + 5.0 * qf2) * s3 + 24.0 * qq * qq * wT * c2 -
       48.0 * qq * wT * (q02 + qf2) * c1 + 12.0 * wT * (q02 * q02 + 4.0 * qq * qq + qf2 * qf2) +
       4.0 * (6.0 * q02 * q02 - 8.0 * q02 * qq + 23.0 * qq * qq - 8.0 * qq * qf2 + 6.0 * qf2 * qf2) *
           s2);
  s.s_beta = -(p.beta / 32.0) * m * m * m * w * w * w * csc4 *
             ((q02 * q02 + qf2 * qf2) * s4 - 44.0 * qq * (q02 + qf2) * s1 -
              12.0 * qq * (q02 + qf2) * s3 + 24.0 * qq * qq * wT * c2 -
              48.0 * qq * wT * (q02 + qf2) * c1 +
              12.0 * wT * (q02 * q02 + 4.0 * qq * qq + qf2 * qf2) +
              4.0 * (2.0 * q02 * q02 + 15.0 * qq * qq + 2.0 * qf2 * qf2) * s2);
  s.total = s.s0 + s.s_alpha + s.s_alpha2 + s.s_beta;
  return s;
}

// ---------------------------------------------------------------- oracles

namespace detail {

// dV/dq by fourth-order central difference (V is only given as a callable)
inline double potential_slope(const Potential& v, double q) {
  if (!v) return 0.0;
  const double h = 1e-5 * std::max(1.0, std::abs(q));
  return (-v(q + 2 * h) + 8.0 * v(q + h) - 8.0 * v(q - h) + v(q - 2 * h)) / (12.0 * h);
}

// Exact Euler-Lagrange acceleration; throws near the kinetic-factor zero.
inline double el_acceleration(double q, double qd, const GupParams& p, const Potential& v) {
  const double mv = p.mass * qd;
  const double bracket =
      1.0 + 6.0 * p.alpha * mv + (48.0 * p.alpha * p.alpha - 12.0 * p.beta) * mv * mv;
  if (std::abs(bracket) < 1e-8)
    throw physics_error("singular_dynamics", "velocity at the kinetic-factor singularity");
  return -potential_slope(v, q) / (p.mass * bracket);
}

} // namespace detail

/// Non-perturbative boundary-value oracle: RK4 (fixed step T/2000) shooting
/// on the initial velocity, bisection refined to |q(T) - qf| below
/// 1e-10 max(1, |qf|). Returns a grid-backed trajectory.
inline Trajectory bvp_shoot(const Boundary& b, const GupParams& p, const Potential& potential) {
  check_boundary(b);
  constexpr int kSteps = 2000;

  auto integrate = [&](double v0) {
    auto deriv = [&](double, const State& y) {
      return State{y[1], detail::el_acceleration(y[0], y[1], p, potential)};
    };
    return rk4_integrate(deriv, {b.q0, v0}, 0.0, b.T, kSteps);
  };
  auto miss = [&](double v0) { return integrate(v0).back().second[0] - b.qf; };

  // expanding bracket around the straight-line guess
  const double v_guess = (b.qf - b.q0) / b.T;
  double d = std::max(1.0, std::abs(v_guess));
  double lo = v_guess - d, hi = v_guess + d;
  double flo = miss(lo), fhi = miss(hi);
  int expand = 0;
  while (flo * fhi > 0.0 && expand++ < 40) {
    d *= 2.0;
    lo = v_guess - d;
    hi = v_guess + d;
    flo = miss(lo);
    fhi = miss(hi);
  }
  if (flo * fhi > 0.0)
    throw physics_error("no_convergence", "shooting failed to bracket the boundary value");

  for (int it = 0; it < 50 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = miss(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  const double v0 = 0.5 * (lo + hi);
  auto path = integrate(v0);
  if (std::abs(path.back().second[0] - b.qf) > 1e-10 * std::max(1.0, std::abs(b.qf)))
    throw physics_error("no_convergence", "shooting did not reach the endpoint tolerance");

  Trajectory tr;
  tr.boundary = b;
  tr.params = p;
  tr.has_closed_form = false;
  tr.grid.reserve(path.size());
  for (auto& [t, y] : path) tr.grid.push_back({t, y[0], y[1]});
  return tr;
}

/// Gauss-Legendre integral of the Lagrangian along a path; the order is
/// doubled until the estimate moves by less than 1e-12 relative.
inline double action_quadrature(const Trajectory& traj, const GupParams& p,
                                const Potential& potential = {}) {
  const double T = traj.boundary.T;
  auto integrand = [&](double t) {
    return gup_lagrangian(traj.velocity(t), traj.position(t), p, potential);
  };
  double prev = 0.0;
  bool have_prev = false;
  for (int order = 16; order <= 256; order *= 2) {
    const auto rule = gauss_rule(QuadKind::legendre, order);
    const double est = rule.integrate(integrand, 0.0, T);
    if (have_prev && std::abs(est - prev) <= 1e-12 * std::max(1.0, std::abs(est))) return est;
    prev = est;
    have_prev = true;
  }
  return prev;
}

} // namespace gup
