#pragma once

// Zero-dimensional ideals: standard monomials, multiplication matrices,
// Artinian local algebras, and rational points of projective zero loci.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hilbert.hpp"

namespace tailsheaf {

// Leads contain a pure power of every variable.
template <Field F>
bool is_zero_dimensional(const IdealGB<F>& gb) {
  if (gb.is_unit()) return true;
  for (int v = 0; v < gb.nvars(); ++v) {
    bool found = false;
    for (const auto& m : gb.lead_monomials())
      if (m.degree == m.exp[v]) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

// Monomials outside the lead ideal, in increasing grevlex order (1 first).
template <Field F>
std::vector<Monomial> standard_monomials(const IdealGB<F>& gb) {
  if (!is_zero_dimensional(gb)) throw PreconditionError("ideal is not zero-dimensional");
  if (gb.is_unit()) return {};
  auto leads = gb.lead_monomials();
  auto standard = [&](const Monomial& m) {
    for (const auto& l : leads)
      if (l.divides(m)) return false;
    return true;
  };
  std::set<Monomial> seen{Monomial::one()};
  std::vector<Monomial> frontier{Monomial::one()}, out;
  while (!frontier.empty()) {
    std::vector<Monomial> next;
    for (const auto& m : frontier) {
      out.push_back(m);
      for (int v = 0; v < gb.nvars(); ++v) {
        Monomial c = m * Monomial::var(v);
        if (standard(c) && seen.insert(c).second) next.push_back(c);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Matrix of multiplication by x_var on S/I in the basis `basis`:
// column b holds the normal form of x_var * basis[b].
template <Field F>
DenseMatrix<F> multiplication_matrix(const IdealGB<F>& gb, const std::vector<Monomial>& basis, int var) {
  int m = static_cast<int>(basis.size());
  std::map<Monomial, int> idx;
  for (int i = 0; i < m; ++i) idx[basis[i]] = i;
  DenseMatrix<F> c(m, m);
  for (int b = 0; b < m; ++b) {
    auto nf = gb.normal_form(Poly<F>::monomial(gb.nvars(), basis[b] * Monomial::var(var)));
    for (const auto& [mono, coef] : nf.terms()) {
      auto it = idx.find(mono);
      if (it == idx.end()) throw InconsistencyError("normal form left the standard monomials");
      c(it->second, b) = coef;
    }
  }
  return c;
}

template <Field F>
bool is_nilpotent(const DenseMatrix<F>& a) {
  DenseMatrix<F> p = a;
  for (int k = 1; k < a.rows(); ++k) p = p * a;
  return a.rows() == 0 || p.is_zero();
}

template <Field F>
struct LocalAlgebra {
  int nvars = 0;                       // chart variables u_0..u_{nvars-1}
  std::vector<Poly<F>> generators;
  std::vector<Monomial> basis;         // e_1..e_m, 1 first
  std::vector<DenseMatrix<F>> matrices;  // C_i: multiplication by u_i

  int length() const { return static_cast<int>(basis.size()); }
};

template <Field F>
void check_commuting_nilpotent(const std::vector<DenseMatrix<F>>& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!is_nilpotent(c[i])) throw PreconditionError("multiplication matrix C_" + std::to_string(i) + " is not nilpotent");
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!(c[i] * c[j] == c[j] * c[i])) throw PreconditionError("matrices C_" + std::to_string(i) + " and C_" + std::to_string(j) + " do not commute");
  }
}

// Artinian local algebra of an affine ideal supported at the origin.
template <Field F>
LocalAlgebra<F> local_algebra(int nvars, const std::vector<Poly<F>>& gens) {
  IdealGB<F> gb(nvars, gens);
  if (gb.is_unit()) throw PreconditionError("ideal is the unit ideal");
  if (!is_zero_dimensional(gb)) throw PreconditionError("ideal is positive-dimensional");
  LocalAlgebra<F> out;
  out.nvars = nvars;
  out.generators = gens;
  out.basis = standard_monomials(gb);
  for (int v = 0; v < nvars; ++v) out.matrices.push_back(multiplication_matrix(gb, out.basis, v));
  for (std::size_t i = 0; i < out.matrices.size(); ++i)
    if (!is_nilpotent(out.matrices[i])) throw PreconditionError("ideal is not supported only at the origin");
  for (std::size_t i = 0; i < out.matrices.size(); ++i)
    for (std::size_t j = i + 1; j < out.matrices.size(); ++j)
      if (!(out.matrices[i] * out.matrices[j] == out.matrices[j] * out.matrices[i]))
        throw InconsistencyError("multiplication matrices do not commute");
  return out;
}

// Characteristic polynomial det(zI - A) by Faddeev-LeVerrier; coefficient of z^k at index k.
template <Field F>
std::vector<F> characteristic_polynomial(const DenseMatrix<F>& a) {
  int n = a.rows();
  std::vector<F> c(n + 1);
  c[n] = F(1);
  DenseMatrix<F> m(n, n);
  for (int k = 1; k <= n; ++k) {
    DenseMatrix<F> am = a * m;
    for (int i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
    m = am;
    DenseMatrix<F> t = a * m;
    F tr(0);
    for (int i = 0; i < n; ++i) tr += t(i, i);
    c[n - k] = -tr / F(k);
  }
  return c;
}

namespace detail {

using UniPoly = std::vector<Rational>;  // coefficient of z^k at index k, no trailing zeros

inline void trim(UniPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline UniPoly poly_mod(UniPoly a, const UniPoly& b) {
  while (a.size() >= b.size()) {
    Rational f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[off + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline UniPoly poly_div(UniPoly a, const UniPoly& b) {
  UniPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size()) {
    Rational f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    q[off] = f;
    for (std::size_t k = 0; k < b.size(); ++k) a[off + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return q;
}

inline UniPoly squarefree_part(const UniPoly& f) {
  UniPoly d;
  for (std::size_t k = 1; k < f.size(); ++k) d.push_back(f[k] * Rational(static_cast<long>(k)));
  trim(d);
  if (d.empty()) return f;
  UniPoly a = f, b = d;
  while (!b.empty()) {
    UniPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_div(f, a);
}

// Positive divisors of |v|, or nothing if |v| resists trial factoring.
inline std::optional<std::vector<mpz_class>> divisors(mpz_class v) {
  v = abs(v);
  if (v == 0) return std::nullopt;
  std::vector<std::pair<mpz_class, int>> factors;
  for (unsigned long p = 2; p < 200000 && mpz_class(p) * p <= v; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      v /= p;
      ++e;
    }
    if (e) factors.emplace_back(mpz_class(p), e);
  }
  if (v > 1) {
    if (mpz_class(200000) * 200000 <= v && mpz_probab_prime_p(v.get_mpz_t(), 30) == 0) return std::nullopt;
    factors.emplace_back(v, 1);
  }
  std::vector<mpz_class> out{1};
  for (const auto& [p, e] : factors) {
    std::size_t base = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

}  // namespace detail

// Rational roots of a nonzero univariate polynomial (coefficient of z^k at k).
// Returns nothing when the rational root test could not be completed.
inline std::optional<std::vector<Rational>> rational_roots(const std::vector<Rational>& poly) {
  std::vector<Rational> p = poly;
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  if (p.size() <= 1) {
    if (p.empty()) throw PreconditionError("roots of the zero polynomial");
    return std::vector<Rational>{};
  }
  std::vector<Rational> roots;
  std::size_t shift = 0;
  while (p[shift].is_zero()) ++shift;
  if (shift) roots.push_back(Rational(0));
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(shift));
  if (p.size() == 1) return roots;
  p = detail::squarefree_part(p);
  mpz_class l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
  std::vector<mpz_class> g;
  for (const auto& c : p) g.push_back(c.numerator() * (l / c.denominator()));
  mpz_class content = 0;
  for (const auto& c : g) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  for (auto& c : g) c /= content;
  auto num = detail::divisors(g.front());
  auto den = detail::divisors(g.back());
  if (!num || !den) return std::nullopt;
  auto eval = [&](const mpq_class& x) {
    mpq_class v = 0;
    for (std::size_t k = g.size(); k-- > 0;) v = v * x + g[k];
    return v;
  };
  std::set<mpq_class> found;
  for (const auto& a : *num)
    for (const auto& b : *den)
      for (int s : {1, -1}) {
        mpq_class x(a * s, b);
        x.canonicalize();
        if (found.count(x)) continue;
        if (eval(x) == 0) found.insert(x);
      }
  for (const auto& x : found) roots.push_back(Rational(x));
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct ProjectivePoint {
  std::vector<Rational> coords;  // last nonzero coordinate is 1
  long long multiplicity = 0;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? ":" : "") + coords[i].to_string();
    return s + ")";
  }
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
    return a.coords == b.coords && a.multiplicity == b.multiplicity;
  }
};

enum class LocusKind { Empty, RationalPoints, NonRationalPoints, PositiveDimensional };

inline std::string to_string(LocusKind k) {
  switch (k) {
    case LocusKind::Empty: return "empty";
    case LocusKind::RationalPoints: return "points";
    case LocusKind::NonRationalPoints: return "points (some not rational, not enumerated)";
    case LocusKind::PositiveDimensional: return "positive-dimensional";
  }
  return "?";
}

struct ZeroLocus {
  LocusKind kind = LocusKind::Empty;
  int dimension = -1;      // projective dimension, -1 when empty
  long long length = 0;    // degree of the scheme when zero-dimensional
  std::vector<ProjectivePoint> points;
  long long unresolved_length = 0;  // length not accounted for by rational points
};

namespace detail {

// Ideal of the chart x_j = 1, in the remaining variables (order preserved).
template <Field F>
std::vector<Poly<F>> chart_ideal(const std::vector<Poly<F>>& gens, int j) {
  std::vector<Poly<F>> out;
  for (const auto& g : gens) out.push_back(g.dehomogenize(j));
  return out;
}

}  // namespace detail

// Rational points (with local lengths) of a zero-dimensional affine ideal,
// from the eigenstructure of the multiplication matrices.
inline std::optional<std::vector<std::pair<std::vector<Rational>, long long>>> affine_rational_points(const IdealGB<Rational>& gb) {
  std::vector<std::pair<std::vector<Rational>, long long>> out;
  if (gb.is_unit()) return out;
  auto basis = standard_monomials(gb);
  int len = static_cast<int>(basis.size());
  int nv = gb.nvars();
  std::vector<DenseMatrix<Rational>> mats;
  std::vector<std::vector<Rational>> values;
  for (int v = 0; v < nv; ++v) {
    mats.push_back(multiplication_matrix(gb, basis, v));
    auto roots = rational_roots(characteristic_polynomial(mats.back()));
    if (!roots) return std::nullopt;
    values.push_back(*roots);
  }
  // Walk the product of coordinate candidates, pruning by joint eigenspaces.
  std::vector<Rational> point(nv);
  std::function<void(int, const std::vector<std::vector<Rational>>&)> rec = [&](int v, const std::vector<std::vector<Rational>>& space) {
    if (space.empty()) return;
    if (v == nv) {
      for (const auto& g : gb.generators())
        if (!g.evaluate(point).is_zero()) return;
      out.emplace_back(point, static_cast<long long>(space.size()));
      return;
    }
    for (const auto& val : values[v]) {
      // generalized eigenspace of mats[v] for val, intersected with `space`
      DenseMatrix<Rational> shifted = mats[v];
      for (int i = 0; i < len; ++i) shifted(i, i) -= val;
      DenseMatrix<Rational> power = DenseMatrix<Rational>::identity(len);
      for (int k = 0; k < len; ++k) power = power * shifted;
      int d = static_cast<int>(space.size());
      DenseMatrix<Rational> restricted(len, d);
      for (int c = 0; c < d; ++c) {
        auto img = power.apply(space[c]);
        for (int i = 0; i < len; ++i) restricted(i, c) = img[i];
      }
      std::vector<std::vector<Rational>> sub;
      for (const auto& k : restricted.kernel()) {
        std::vector<Rational> vec(len);
        for (int c = 0; c < d; ++c)
          if (!k[c].is_zero())
            for (int i = 0; i < len; ++i) vec[i] += k[c] * space[c][i];
        sub.push_back(std::move(vec));
      }
      point[v] = val;
      rec(v + 1, sub);
    }
  };
  std::vector<std::vector<Rational>> whole;
  for (int i = 0; i < len; ++i) {
    std::vector<Rational> e(len);
    e[i] = Rational(1);
    whole.push_back(std::move(e));
  }
  rec(0, whole);
  return out;
}

inline ZeroLocus projective_zero_locus(const IdealGB<Rational>& ideal) {
  if (!ideal.homogeneous()) throw PreconditionError("projective zero locus needs a homogeneous ideal");
  const int nv = ideal.nvars();
  ZeroLocus z;
  auto red = hilbert_series(ideal).reduced();
  bool charts_empty = true;
  std::vector<IdealGB<Rational>> charts;
  for (int j = 0; j < nv; ++j) {
    charts.emplace_back(nv - 1, detail::chart_ideal(ideal.basis(), j));
    if (!charts.back().is_unit()) charts_empty = false;
  }
  if (charts_empty != (red.dimension <= 0)) throw InconsistencyError("chart emptiness disagrees with the Hilbert series");
  if (charts_empty) return z;
  z.dimension = red.dimension - 1;
  if (z.dimension > 0) {
    z.kind = LocusKind::PositiveDimensional;
    return z;
  }
  z.length = red.multiplicity();
  long long found = 0;
  for (int j = 0; j < nv; ++j) {
    auto pts = affine_rational_points(charts[j]);
    if (!pts) continue;  // root search gave up; the length stays unresolved
    for (auto& [p, mult] : *pts) {
      // keep points whose last nonzero coordinate is x_j
      bool later_zero = true;
      for (int k = j; k < nv - 1; ++k)
        if (!p[k].is_zero()) later_zero = false;
      if (!later_zero) continue;
      ProjectivePoint q;
      for (int k = 0; k < j; ++k) q.coords.push_back(p[k]);
      q.coords.push_back(Rational(1));
      for (int k = j + 1; k < nv; ++k) q.coords.push_back(Rational(0));
      q.multiplicity = mult;
      found += mult;
      z.points.push_back(std::move(q));
    }
  }
  std::sort(z.points.begin(), z.points.end(), [](const ProjectivePoint& a, const ProjectivePoint& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
  });
  if (found > z.length) throw InconsistencyError("local lengths exceed the degree of the scheme");
  z.unresolved_length = z.length - found;
  z.kind = found == z.length ? LocusKind::RationalPoints : LocusKind::NonRationalPoints;
  return z;
}

}  // namespace tailsheaf
