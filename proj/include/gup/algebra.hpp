#pragma once

// Term-rewriting engine over momentum-operator monomials. A term is an exact
// rational polynomial coefficient in the deformation symbols, times powers of
// i and hbar, times Kronecker deltas, commuting momentum components p_x, and
// an integer power of the momentum norm p. All noncommutativity enters
// through [q_x, .], implemented as a derivation on these monomials.
//
// Grading: alpha-like symbols count 1, beta-like count 2; products exceeding
// grade 2 are dropped everywhere (the working expansion order).

#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gup/errors.hpp"

namespace gup::algebra {

// ---------------------------------------------------------------- rationals

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw physics_error("zero_denominator", "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  bool is_zero() const { return num == 0; }
  friend Rational operator+(Rational x, Rational y) {
    return Rational(x.num * y.den + y.num * x.den, x.den * y.den);
  }
  friend Rational operator-(Rational x, Rational y) {
    return Rational(x.num * y.den - y.num * x.den, x.den * y.den);
  }
  friend Rational operator*(Rational x, Rational y) { return Rational(x.num * y.num, x.den * y.den); }
  friend Rational operator-(Rational x) { return Rational(-x.num, x.den); }
  friend bool operator==(Rational x, Rational y) { return x.num == y.num && x.den == y.den; }
  friend auto operator<=>(Rational x, Rational y) {
    return x.num * y.den <=> y.num * x.den;
  }
};

// ---------------------------------------------------------------- polynomials

enum class Sym : int { alpha1 = 0, alpha2, beta1, beta2, a, b, alpha, n };

inline int sym_grade(Sym s) {
  switch (s) {
    case Sym::alpha1:
    case Sym::alpha2:
    case Sym::a:
    case Sym::alpha:
      return 1;
    case Sym::beta1:
    case Sym::beta2:
    case Sym::b:
      return 2;
    case Sym::n:
      return 0;
  }
  return 0;
}

inline const char* sym_name(Sym s) {
  switch (s) {
    case Sym::alpha1: return "alpha1";
    case Sym::alpha2: return "alpha2";
    case Sym::beta1: return "beta1";
    case Sym::beta2: return "beta2";
    case Sym::a: return "a";
    case Sym::b: return "b";
    case Sym::alpha: return "alpha";
    case Sym::n: return "n";
  }
  return "?";
}

using Monomial = std::map<Sym, int>; // symbol -> exponent, exponents > 0

inline int monomial_grade(const Monomial& m) {
  int g = 0;
  for (auto& [s, e] : m) g += sym_grade(s) * e;
  return g;
}

/// Multivariate polynomial with exact rational coefficients, truncated at
/// grade 2 in the deformation symbols.
struct Poly {
  std::map<Monomial, Rational> terms;

  static Poly zero() { return {}; }
  static Poly constant(Rational c) {
    Poly p;
    if (!c.is_zero()) p.terms[{}] = c;
    return p;
  }
  static Poly symbol(Sym s, int pow = 1) {
    Poly p;
    p.terms[Monomial{{s, pow}}] = Rational(1);
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const Monomial& m, Rational c) {
    if (c.is_zero() || monomial_grade(m) > 2) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms[m] = c;
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  friend Poly operator+(const Poly& x, const Poly& y) {
    Poly r = x;
    for (auto& [m, c] : y.terms) r.add_term(m, c);
    return r;
  }
  friend Poly operator-(const Poly& x, const Poly& y) {
    Poly r = x;
    for (auto& [m, c] : y.terms) r.add_term(m, -c);
    return r;
  }
  friend Poly operator*(const Poly& x, const Poly& y) {
    Poly r;
    for (auto& [mx, cx] : x.terms)
      for (auto& [my, cy] : y.terms) {
        Monomial m = mx;
        for (auto& [s, e] : my) m[s] += e;
        r.add_term(m, cx * cy);
      }
    return r;
  }
  friend Poly operator*(Rational c, const Poly& x) {
    Poly r;
    for (auto& [m, cm] : x.terms) r.add_term(m, c * cm);
    return r;
  }
  friend Poly operator-(const Poly& x) { return Rational(-1) * x; }
  friend bool operator==(const Poly& x, const Poly& y) { return x.terms == y.terms; }
  friend auto operator<=>(const Poly& x, const Poly& y) = default;

  Poly substitute(Sym s, const Poly& value) const {
    Poly r;
    for (auto& [m, c] : terms) {
      Poly factor = Poly::constant(c);
      Poly rest = Poly::constant(Rational(1));
      int pow = 0;
      Monomial keep;
      for (auto& [sm, e] : m) {
        if (sm == s) {
          pow = e;
        } else {
          keep[sm] = e;
        }
      }
      Poly base;
      base.add_term(keep, c);
      Poly repl = Poly::constant(Rational(1));
      for (int k = 0; k < pow; ++k) repl = repl * value;
      (void)factor;
      (void)rest;
      r = r + base * repl;
    }
    return r;
  }
};

// ---------------------------------------------------------------- terms

using DeltaPair = std::pair<char, char>; // stored with first <= second

/// One operator monomial: coeff * i^i_pow * hbar^hbar_pow * (deltas) *
/// (momentum components) * p^pnorm_power.
struct MomentumTerm {
  Poly coeff = Poly::constant(Rational(1));
  int i_pow = 0;
  int hbar_pow = 0;
  std::multiset<DeltaPair> deltas;
  std::multiset<char> components;
  int pnorm_power = 0;

  auto signature() const {
    return std::tie(hbar_pow, i_pow, deltas, components, pnorm_power);
  }
  friend bool operator==(const MomentumTerm& x, const MomentumTerm& y) {
    return x.signature() == y.signature() && x.coeff == y.coeff;
  }
};

struct TermSum {
  std::vector<MomentumTerm> terms;

  bool empty() const { return terms.empty(); }
  friend TermSum operator+(const TermSum& x, const TermSum& y) {
    TermSum r = x;
    r.terms.insert(r.terms.end(), y.terms.begin(), y.terms.end());
    return r;
  }
  friend TermSum operator*(Rational c, const TermSum& x) {
    TermSum r = x;
    for (auto& t : r.terms) t.coeff = c * t.coeff;
    return r;
  }
  friend TermSum operator-(const TermSum& x) { return Rational(-1) * x; }
  friend TermSum operator-(const TermSum& x, const TermSum& y) { return x + (-y); }
};

inline DeltaPair make_delta(char x, char y) { return x <= y ? DeltaPair{x, y} : DeltaPair{y, x}; }

inline MomentumTerm multiply_terms(const MomentumTerm& x, const MomentumTerm& y) {
  MomentumTerm r;
  r.coeff = x.coeff * y.coeff;
  r.i_pow = x.i_pow + y.i_pow;
  r.hbar_pow = x.hbar_pow + y.hbar_pow;
  r.deltas = x.deltas;
  r.deltas.insert(y.deltas.begin(), y.deltas.end());
  r.components = x.components;
  r.components.insert(y.components.begin(), y.components.end());
  r.pnorm_power = x.pnorm_power + y.pnorm_power;
  return r;
}

inline TermSum multiply_sums(const TermSum& x, const TermSum& y) {
  TermSum r;
  for (auto& tx : x.terms)
    for (auto& ty : y.terms) r.terms.push_back(multiply_terms(tx, ty));
  return r;
}

// ---------------------------------------------------------------- normalize

namespace detail {

inline bool is_free_index(char c) { return c == 'i' || c == 'j' || c == 'k' || c == 'l'; }

// Rename index `from` to `to` in deltas and components.
inline void rename_index(MomentumTerm& t, char from, char to) {
  std::multiset<DeltaPair> nd;
  for (auto& d : t.deltas)
    nd.insert(make_delta(d.first == from ? to : d.first, d.second == from ? to : d.second));
  t.deltas = nd;
  std::multiset<char> nc;
  for (char c : t.components) nc.insert(c == from ? to : c);
  t.components = nc;
}

inline int index_count(const MomentumTerm& t, char x) {
  int n = 0;
  for (auto& d : t.deltas) n += (d.first == x) + (d.second == x);
  for (char c : t.components) n += (c == x);
  return n;
}

// Contract deltas against anything sharing a (summed) index, fold repeated
// component indices into p^2, and sum diagonal deltas over the 3 dimensions.
inline void contract(MomentumTerm& t) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = t.deltas.begin(); it != t.deltas.end(); ++it) {
      auto [x, y] = *it;
      if (x == y) {
        // repeated index on one delta: summed trace -> dimension factor
        if (index_count(t, x) == 2) {
          t.deltas.erase(it);
          t.coeff = Rational(3) * t.coeff;
        } else {
          t.deltas.erase(it); // delta_xx with x fixed elsewhere -> 1
        }
        changed = true;
        break;
      }
      // delta_xy with y repeated elsewhere: drop delta, rename y -> x
      const bool y_elsewhere = index_count(t, y) > 1;
      const bool x_elsewhere = index_count(t, x) > 1;
      if (y_elsewhere || x_elsewhere) {
        const char keep = y_elsewhere ? x : y;
        const char drop = y_elsewhere ? y : x;
        t.deltas.erase(it);
        rename_index(t, drop, keep);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    // p_x p_x (summed) -> p^2
    for (char c : std::set<char>(t.components.begin(), t.components.end())) {
      if (t.components.count(c) >= 2) {
        auto it = t.components.find(c);
        t.components.erase(it);
        it = t.components.find(c);
        t.components.erase(it);
        t.pnorm_power += 2;
        changed = true;
        break;
      }
    }
  }
}

// Rename leftover non-free indices to u, v, w ... in order of appearance in
// the canonical serialization, so equal terms compare bit-identically.
inline void canonicalize_dummies(MomentumTerm& t) {
  std::vector<char> order;
  auto note = [&](char c) {
    if (is_free_index(c)) return;
    for (char o : order)
      if (o == c) return;
    order.push_back(c);
  };
  for (auto& d : t.deltas) {
    note(d.first);
    note(d.second);
  }
  for (char c : t.components) note(c);
  const char pool[] = {'u', 'v', 'w', 'x', 'y', 'z'};
  for (size_t k = 0; k < order.size() && k < sizeof(pool); ++k)
    if (order[k] != pool[k]) rename_index(t, order[k], pool[k]);
}

} // namespace detail

/// Contraction, dummy canonicalization, i^2 -> -1 folding, grade truncation
/// and like-term collection. Idempotent; result order is canonical.
inline TermSum normalize(const TermSum& s) {
  std::map<std::tuple<int, int, std::multiset<DeltaPair>, std::multiset<char>, int>, Poly> acc;
  for (MomentumTerm t : s.terms) {
    detail::contract(t);
    detail::canonicalize_dummies(t);
    // fold powers of i into the sign
    if (t.i_pow >= 2) {
      const int q = t.i_pow / 2;
      t.i_pow %= 2;
      if (q % 2 == 1) t.coeff = Rational(-1) * t.coeff;
    }
    if (t.coeff.is_zero()) continue;
    auto key = std::make_tuple(t.hbar_pow, t.i_pow, t.deltas, t.components, t.pnorm_power);
    auto it = acc.find(key);
    if (it == acc.end())
      acc.emplace(key, t.coeff);
    else
      it->second = it->second + t.coeff;
  }
  TermSum out;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    MomentumTerm t;
    t.hbar_pow = std::get<0>(key);
    t.i_pow = std::get<1>(key);
    t.deltas = std::get<2>(key);
    t.components = std::get<3>(key);
    t.pnorm_power = std::get<4>(key);
    t.coeff = coeff;
    out.terms.push_back(t);
  }
  return out;
}

inline bool structurally_equal(const TermSum& x, const TermSum& y) {
  const TermSum nx = normalize(x), ny = normalize(y);
  if (nx.terms.size() != ny.terms.size()) return false;
  for (size_t i = 0; i < nx.terms.size(); ++i)
    if (!(nx.terms[i] == ny.terms[i])) return false;
  return true;
}

inline TermSum substitute(const TermSum& s, Sym sym, const Poly& value) {
  TermSum r = s;
  for (auto& t : r.terms) t.coeff = t.coeff.substitute(sym, value);
  return normalize(r);
}

// ---------------------------------------------------------------- base rules

/// Full deformed commutator [q_x, p_y]:
/// ih (d_xy + d_xy alpha1 p + alpha2 p_x p_y p^-1 + beta1 d_xy p^2 + beta2 p_x p_y).
inline TermSum commutator_qi_pj(char x, char y) {
  TermSum s;
  auto base = [&](Poly c, bool delta, int ncomp, int ppow) {
    MomentumTerm t;
    t.coeff = c;
    t.i_pow = 1;
    t.hbar_pow = 1;
    if (delta) t.deltas.insert(make_delta(x, y));
    if (ncomp) {
      t.components.insert(x);
      t.components.insert(y);
    }
    t.pnorm_power = ppow;
    s.terms.push_back(t);
  };
  base(Poly::constant(Rational(1)), true, 0, 0);
  base(Poly::symbol(Sym::alpha1), true, 0, 1);
  base(Poly::symbol(Sym::alpha2), false, 2, -1);
  base(Poly::symbol(Sym::beta1), true, 0, 2);
  base(Poly::symbol(Sym::beta2), false, 2, 0);
  return s;
}

/// [q_x, p] to first order in the deformation:
/// ih { p_x p^-1 + (alpha1 + alpha2) p_x }.
inline TermSum commutator_qi_pnorm(char x) {
  TermSum s;
  MomentumTerm t1;
  t1.i_pow = 1;
  t1.hbar_pow = 1;
  t1.components.insert(x);
  t1.pnorm_power = -1;
  s.terms.push_back(t1);
  MomentumTerm t2;
  t2.coeff = Poly::symbol(Sym::alpha1) + Poly::symbol(Sym::alpha2);
  t2.i_pow = 1;
  t2.hbar_pow = 1;
  t2.components.insert(x);
  s.terms.push_back(t2);
  return s;
}

/// [q_x, p^-1] = -ih p_x p^-3 { 1 + (alpha1 + alpha2) p }, from the chain rule.
inline TermSum commutator_qi_pinv(char x) {
  TermSum s = commutator_qi_pnorm(x);
  for (auto& t : s.terms) {
    t.coeff = Rational(-1) * t.coeff;
    t.pnorm_power -= 2; // -p^-2 * [q_x, p]
  }
  return s;
}

// --------------------------------------------------------- derivation engine

/// [q_x, t] for a single monomial, by the product rule over component factors
/// and the chain rule on the norm power.
inline TermSum commutator_q_term(char x, const MomentumTerm& t) {
  TermSum result;
  // component factors
  std::multiset<char> comps = t.components;
  for (char c : std::set<char>(comps.begin(), comps.end())) {
    const int mult = int(comps.count(c));
    MomentumTerm rest = t;
    auto it = rest.components.find(c);
    rest.components.erase(it);
    rest.coeff = Rational(mult) * rest.coeff;
    TermSum piece = multiply_sums(TermSum{{rest}}, commutator_qi_pj(x, c));
    result = result + piece;
  }
  // norm power (z p^{z-1} [q_x, p])
  if (t.pnorm_power != 0) {
    MomentumTerm rest = t;
    rest.pnorm_power -= 1;
    rest.coeff = Rational(t.pnorm_power) * rest.coeff;
    result = result + multiply_sums(TermSum{{rest}}, commutator_qi_pnorm(x));
  }
  return result;
}

inline TermSum commutator_q(char x, const TermSum& s) {
  TermSum r;
  for (auto& t : s.terms) r = r + commutator_q_term(x, t);
  return normalize(r);
}

// ---------------------------------------------------------------- Jacobi

/// Antisymmetrized double commutator [[q_j, p_k], q_i] + [[p_k, q_i], q_j],
/// expanded to grade 2 and normalized. The result is proportional to
/// (p_i d_jk - p_j d_ik) with scalar prefactor
/// {(alpha1 - alpha2) p^-1 + (alpha1^2 + 2 beta1 - beta2)} (times hbar^2).
inline TermSum jacobi_residual() {
  const TermSum inner_jk = commutator_qi_pj('j', 'k');
  const TermSum inner_ik = commutator_qi_pj('i', 'k');
  // [[q_j,p_k],q_i] = -[q_i,[q_j,p_k]] ; [[p_k,q_i],q_j] = [q_j,[q_i,p_k]]
  TermSum r = normalize(commutator_q('j', inner_ik) - commutator_q('i', inner_jk));
  // strip the common (i hbar)^2 so the structural prefactor is bare
  for (auto& t : r.terms) {
    if (t.hbar_pow != 2 || t.i_pow != 0)
      throw physics_error("internal", "unexpected hbar/i bookkeeping in the double commutator");
    t.hbar_pow = 0;
  }
  return r;
}

/// Equations that make a jacobi_residual-shaped sum vanish, one per distinct
/// (deltas, components, pnorm) structure, normalized to positive leading
/// coefficient with integer content removed.
struct ConstraintSet {
  std::vector<Poly> equations;
};

namespace detail {

inline Poly normalize_equation(Poly p) {
  if (p.is_zero()) return p;
  // divide out rational content, make the leading (first) coefficient positive
  long long num_gcd = 0, den_lcm = 1;
  for (auto& [m, c] : p.terms) {
    num_gcd = std::gcd(num_gcd, c.num < 0 ? -c.num : c.num);
    den_lcm = den_lcm / std::gcd(den_lcm, c.den) * c.den;
  }
  Rational scale(den_lcm, num_gcd == 0 ? 1 : num_gcd);
  Poly q = scale * p;
  if (q.terms.begin()->second < Rational(0)) q = Rational(-1) * q;
  return q;
}

} // namespace detail

inline ConstraintSet solve_jacobi_constraints(const TermSum& residual) {
  const TermSum r = normalize(residual);
  std::map<Poly, bool> seen;
  ConstraintSet cs;
  for (auto& t : r.terms) {
    if (t.components.size() != 1 || t.deltas.size() != 1)
      throw physics_error("unexpected_structure",
                          "residual is not of the (p_i d_jk - p_j d_ik) form");
    Poly eq = detail::normalize_equation(t.coeff);
    if (!eq.is_zero() && !seen[eq]) {
      seen[eq] = true;
      cs.equations.push_back(eq);
    }
  }
  return cs;
}

// ------------------------------------------------------- representation map

namespace detail {

// Multiply a p0-expressed term by the change-of-variables factor that turns
// p0-language structures into p-language ones, expanded to grade 2:
//   each of the (ncomp + z) powers of p0 contributes (1 - a p + (2a^2-b) p^2).
inline TermSum to_deformed_variables(const MomentumTerm& t) {
  const int power = int(t.components.size()) + t.pnorm_power;
  const Poly one = Poly::constant(Rational(1));
  const Poly pa = Poly::symbol(Sym::a);
  const Poly pb = Poly::symbol(Sym::b);
  // (1 - a p + (2a^2 - b) p^2)^power, truncated at grade 2
  const Poly lin = Rational(-power) * pa;
  Poly quad = Rational(power) * (Rational(2) * (pa * pa) - pb);
  quad = quad + Rational(power * (power - 1) / 2) * (pa * pa);
  TermSum out;
  for (auto& [c, ppow] : std::initializer_list<std::pair<const Poly*, int>>{
           {&one, 0}, {&lin, 1}, {&quad, 2}}) {
    MomentumTerm nt = t;
    nt.coeff = t.coeff * (*c);
    nt.pnorm_power += ppow;
    if (!nt.coeff.is_zero()) out.terms.push_back(nt);
  }
  return out;
}

// Canonical-variable commutator [q_x, p0-monomial]: base rule
// [q_x, p0_c] = ih d_xc, chain rule [q_x, p0^z] = z ih p0_x p0^{z-2}.
inline TermSum commutator_q_term_canonical(char x, const MomentumTerm& t) {
  TermSum result;
  for (char c : std::set<char>(t.components.begin(), t.components.end())) {
    MomentumTerm rest = t;
    auto it = rest.components.find(c);
    rest.components.erase(it);
    rest.coeff = Rational(int(t.components.count(c))) * rest.coeff;
    rest.i_pow += 1;
    rest.hbar_pow += 1;
    rest.deltas.insert(make_delta(x, c));
    result.terms.push_back(rest);
  }
  if (t.pnorm_power != 0) {
    MomentumTerm rest = t;
    rest.coeff = Rational(t.pnorm_power) * rest.coeff;
    rest.i_pow += 1;
    rest.hbar_pow += 1;
    rest.components.insert(x);
    rest.pnorm_power -= 2;
    result.terms.push_back(rest);
  }
  return result;
}

} // namespace detail

/// [q_i, p0_j + a p0 p0_j + b p0^2 p0_j] computed with the canonical rule and
/// re-expressed in the deformed variables:
/// ih d_ij + ih a (p d_ij + p_i p_j p^-1) + ih (2b - a^2) p_i p_j
///         + ih (b - a^2) p^2 d_ij.
inline TermSum representation_commutator() {
  TermSum expansion;
  auto add = [&](Poly c, int ppow) {
    MomentumTerm t;
    t.coeff = c;
    t.components.insert('j');
    t.pnorm_power = ppow;
    expansion.terms.push_back(t);
  };
  add(Poly::constant(Rational(1)), 0);
  add(Poly::symbol(Sym::a), 1);
  add(Poly::symbol(Sym::b), 2);

  TermSum comm;
  for (auto& t : expansion.terms) comm = comm + detail::commutator_q_term_canonical('i', t);
  TermSum converted;
  for (auto& t : comm.terms) converted = converted + detail::to_deformed_variables(t);
  return normalize(converted);
}

/// Match the representation commutator against the solved algebra
/// (beta1 = n alpha^2, beta2 = (2n+1) alpha^2). Returns the raw coefficient
/// equations followed by the derived relation b = (n+1) alpha^2.
inline ConstraintSet match_representation() {
  const Poly al = Poly::symbol(Sym::alpha);
  const Poly nn = Poly::symbol(Sym::n);
  TermSum target;
  auto add = [&](Poly c, bool delta, int ncomp, int ppow) {
    MomentumTerm t;
    t.coeff = c;
    t.i_pow = 1;
    t.hbar_pow = 1;
    if (delta) t.deltas.insert(make_delta('i', 'j'));
    if (ncomp) {
      t.components.insert('i');
      t.components.insert('j');
    }
    t.pnorm_power = ppow;
    target.terms.push_back(t);
  };
  add(Poly::constant(Rational(1)), true, 0, 0);
  add(-al, true, 0, 1);
  add(-al, false, 2, -1);
  add(nn * (al * al), true, 0, 2);
  add((Rational(2) * nn + Poly::constant(Rational(1))) * (al * al), false, 2, 0);

  const TermSum diff = normalize(representation_commutator() - target);
  ConstraintSet cs;
  std::map<Poly, bool> seen;
  for (auto& t : diff.terms) {
    Poly eq = detail::normalize_equation(t.coeff);
    if (!eq.is_zero() && !seen[eq]) {
      seen[eq] = true;
      cs.equations.push_back(eq);
    }
  }
  if (cs.equations.empty()) throw physics_error("inconsistent_match", "no residual equations");
  // derived consequence: (p_i p_j eq) - (p^2 d_ij eq) => b = (n+1) alpha^2
  const Poly pb = Poly::symbol(Sym::b);
  Poly derived = pb - (nn + Poly::constant(Rational(1))) * (al * al);
  cs.equations.push_back(detail::normalize_equation(derived));
  return cs;
}

// ---------------------------------------------------------------- printing

namespace detail {

inline std::string rational_str(Rational r) {
  std::ostringstream os;
  os << r.num;
  if (r.den != 1) os << "/" << r.den;
  return os.str();
}

inline std::string monomial_str(const Monomial& m) {
  std::string s;
  for (auto& [sym, e] : m) {
    if (!s.empty()) s += "*";
    s += sym_name(sym);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

// Print a polynomial, grouping pairs {n*M, c*M} as "(n+c)*M".
inline std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  // collect by monomial-without-n
  struct Part {
    Rational cn{0}, c0{0}; // coefficient of n*M and of M
    Monomial m;
  };
  std::map<Monomial, Part> groups;
  for (auto& [m, c] : p.terms) {
    Monomial base = m;
    int npow = 0;
    auto it = base.find(Sym::n);
    if (it != base.end() && it->second == 1) {
      npow = 1;
      base.erase(it);
    }
    auto& g = groups[base];
    g.m = base;
    if (npow)
      g.cn = g.cn + c;
    else
      g.c0 = g.c0 + c;
  }
  // order: higher graded monomials first, then map order
  std::vector<const Part*> parts;
  for (auto& [m, g] : groups) parts.push_back(&g);
  std::sort(parts.begin(), parts.end(), [](const Part* x, const Part* y) {
    const int gx = x->m.empty() ? -1 : int(x->m.rbegin()->first);
    const int gy = y->m.empty() ? -1 : int(y->m.rbegin()->first);
    if (gx != gy) return gx > gy;
    return x->m < y->m;
  });
  std::string s;
  for (const Part* g : parts) {
    std::string piece;
    const std::string ms = monomial_str(g->m);
    if (!g->cn.is_zero() && g->c0.is_zero()) {
      piece = (g->cn == Rational(1) ? "n" : rational_str(g->cn) + "*n");
      if (!ms.empty()) piece += "*" + ms;
    } else if (!g->cn.is_zero()) {
      std::string inner = (g->cn == Rational(1) ? "n" : rational_str(g->cn) + "*n");
      if (!g->c0.is_zero()) {
        inner += (g->c0 < Rational(0) ? "-" : "+");
        Rational abs0 = g->c0 < Rational(0) ? -g->c0 : g->c0;
        inner += rational_str(abs0);
      }
      piece = "(" + inner + ")";
      if (!ms.empty()) piece += "*" + ms;
    } else {
      Rational c = g->c0;
      const bool neg = c < Rational(0);
      if (neg) c = -c;
      if (ms.empty()) {
        piece = rational_str(c);
      } else if (c == Rational(1)) {
        piece = ms;
      } else {
        piece = rational_str(c) + "*" + ms;
      }
      if (neg) piece = "-" + piece;
    }
    if (s.empty()) {
      s = piece;
    } else if (!piece.empty() && piece[0] == '-') {
      s += piece;
    } else {
      s += "+" + piece;
    }
  }
  return s;
}

} // namespace detail

/// Render "P = 0" as "sym=rest" by isolating the preferred symbol appearing
/// linearly with unit coefficient; falls back to "P=0".
inline std::string format_constraint(const Poly& eq) {
  static const Sym pref[] = {Sym::alpha1, Sym::beta2, Sym::a, Sym::b,
                             Sym::alpha2, Sym::beta1, Sym::alpha, Sym::n};
  for (Sym s : pref) {
    Monomial lone{{s, 1}};
    auto it = eq.terms.find(lone);
    if (it == eq.terms.end()) continue;
    if (!(it->second == Rational(1) || it->second == Rational(-1))) continue;
    // make sure s appears nowhere else
    bool elsewhere = false;
    for (auto& [m, c] : eq.terms)
      if (!(m == lone) && m.count(s)) elsewhere = true;
    if (elsewhere) continue;
    Poly rhs = eq;
    rhs.terms.erase(lone);
    if (it->second == Rational(1)) rhs = -rhs;
    return std::string(sym_name(s)) + "=" + detail::poly_str(rhs);
  }
  return detail::poly_str(eq) + "=0";
}

/// The b = (n+1) alpha^2 relation at a concrete n, printed in beta form
/// ("beta=2*alpha^2" at n = 1).
inline std::string beta_relation_at(int n) {
  Poly al2 = Poly::symbol(Sym::alpha, 2);
  Poly rhs = Rational(n + 1) * al2;
  return "beta=" + detail::poly_str(rhs);
}

// ---------------------------------------------------------------- parsing

/// Plain-text fixture parser. Terms joined by +/-, factors by '*':
/// rationals ("3", "3/4"), "i", "h"/"hbar", "ih", symbols
/// (alpha1|a1|alpha2|a2|beta1|b1|beta2|b2|alpha|a|b|n, optional ^k),
/// "p"/"p0" with optional ^k (k may be negative), components "p_x"/"p0_x",
/// deltas "d_xy".
inline TermSum parse_term_sum(const std::string& text) {
  TermSum out;
  size_t pos = 0;
  const size_t n = text.size();
  auto skip_ws = [&] {
    while (pos < n && std::isspace((unsigned char)text[pos])) ++pos;
  };
  skip_ws();
  while (pos < n) {
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip_ws();
    }
    MomentumTerm term;
    term.coeff = Poly::constant(Rational(sign));
    bool any = false;
    while (pos < n) {
      size_t end = pos;
      // '-' right after '^' is an exponent sign, not a term separator
      while (end < n && text[end] != '*' && text[end] != '+' &&
             (text[end] != '-' || (end > pos && text[end - 1] == '^')) &&
             !std::isspace((unsigned char)text[end]))
        ++end;
      std::string tok = text.substr(pos, end - pos);
      pos = end;
      skip_ws();
      if (tok.empty()) break;
      any = true;
      // split off ^exponent
      int expo = 1;
      if (auto caret = tok.find('^'); caret != std::string::npos) {
        expo = std::stoi(tok.substr(caret + 1));
        tok = tok.substr(0, caret);
      }
      auto symbol_of = [](const std::string& s) -> std::optional<Sym> {
        if (s == "alpha1" || s == "a1") return Sym::alpha1;
        if (s == "alpha2" || s == "a2") return Sym::alpha2;
        if (s == "beta1" || s == "b1") return Sym::beta1;
        if (s == "beta2" || s == "b2") return Sym::beta2;
        if (s == "alpha") return Sym::alpha;
        if (s == "a") return Sym::a;
        if (s == "b") return Sym::b;
        if (s == "n") return Sym::n;
        return std::nullopt;
      };
      if (tok == "ih") {
        term.i_pow += expo;
        term.hbar_pow += expo;
      } else if (tok == "i") {
        term.i_pow += expo;
      } else if (tok == "h" || tok == "hbar") {
        term.hbar_pow += expo;
      } else if (tok == "p" || tok == "p0") {
        term.pnorm_power += expo;
      } else if (tok.rfind("p_", 0) == 0 && tok.size() == 3) {
        for (int r = 0; r < expo; ++r) term.components.insert(tok[2]);
      } else if (tok.rfind("p0_", 0) == 0 && tok.size() == 4) {
        for (int r = 0; r < expo; ++r) term.components.insert(tok[3]);
      } else if (tok.rfind("d_", 0) == 0 && tok.size() == 4) {
        for (int r = 0; r < expo; ++r) term.deltas.insert(make_delta(tok[2], tok[3]));
      } else if (auto sym = symbol_of(tok)) {
        term.coeff = term.coeff * Poly::symbol(*sym, expo);
      } else if (!tok.empty() && (std::isdigit((unsigned char)tok[0]))) {
        long long num = 0, den = 1;
        if (auto slash = tok.find('/'); slash != std::string::npos) {
          num = std::stoll(tok.substr(0, slash));
          den = std::stoll(tok.substr(slash + 1));
        } else {
          num = std::stoll(tok);
        }
        term.coeff = Rational(num, den) * term.coeff;
      } else {
        throw physics_error("parse_error", "unknown token: " + tok);
      }
      if (pos < n && text[pos] == '*') {
        ++pos;
        skip_ws();
        continue;
      }
      break;
    }
    if (any) out.terms.push_back(term);
    skip_ws();
  }
  return out;
}

} // namespace gup::algebra
