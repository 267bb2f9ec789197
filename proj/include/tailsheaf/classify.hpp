#pragma once

// Tail classification from the Hilbert series of E = Ext^1-module, plus the
// singular-locus report and the minimal / level / rank-bound predicates.

#include <sstream>
#include <string>
#include <vector>

#include "cohomology.hpp"
#include "fitting.hpp"
#include "zero_dim.hpp"

namespace tailsheaf {

struct TailClassification {
  bool is_tail = false;
  long long m = 0;
  int k = 0;
  bool normalized = false;
  bool minimal = false;
  bool level = false;
  HilbertSeries hs;
  std::string certificate;
  // non-tails: (t, h^{n-1}(F(t))) at the last unstable twist and the next one down
  std::vector<std::pair<int, long long>> witness;
  std::vector<int> unstable_degrees;  // two smallest d with HF_E(d) != stable value
};

namespace detail {

template <Field F>
bool shape_is_minimal(const SheafPresentation<F>& p, long long m) {
  if (p.rows() != m || p.cols() != p.n() * m) return false;
  for (int a : p.source_twists())
    if (a != 0) return false;
  for (int b : p.target_twists())
    if (b != 1) return false;
  return true;
}

template <Field F>
bool shape_is_level(const SheafPresentation<F>& p, long long m) {
  if (p.rows() != m) return false;
  for (int a : p.source_twists())
    if (a != 0) return false;
  for (int b : p.target_twists())
    if (b < 1) return false;
  return true;
}

}  // namespace detail

template <Field F>
TailClassification classify_tail(const SheafPresentation<F>& p) {
  if (p.n() < 2) throw PreconditionError("classification needs n >= 2");
  TailClassification c;
  c.hs = ext_module(p).hs;
  const int n = p.n();
  auto r = c.hs.reduced();
  if (r.dimension == 1 && r.q.size() == 1 && r.q[0] > 0) {
    c.is_tail = true;
    c.m = r.q[0];
    int d0 = r.low;
    c.k = -d0 - n - 1;
    c.normalized = d0 == 0;
    std::ostringstream os;
    os << "HS_E = " << c.hs.to_string() << " and HS_E * (1-z) = " << c.m << "*z^" << d0;
    c.certificate = os.str();
    auto norm = twist(p, c.k + n + 1);
    c.minimal = detail::shape_is_minimal(norm, c.m);
    c.level = detail::shape_is_level(norm, c.m);
    return c;
  }
  // not a tail: locate where HF_E is not yet stable
  c.m = r.dimension == 1 ? r.multiplicity() : 0;
  std::ostringstream os;
  os << "HS_E = " << c.hs.to_string();
  if (c.hs.is_zero()) {
    os << "; E = 0, the sheaf is a sum of line bundles";
    c.certificate = os.str();
    return c;
  }
  int lo = c.hs.low();
  if (r.dimension <= 1) {
    long long stable = r.dimension == 1 ? r.multiplicity() : 0;
    // HF_E is eventually equal to stable past the numerator degree
    int top = lo + static_cast<int>(c.hs.numerator().size()) + n + 1;
    int last = lo - 1;
    for (int d = lo; d <= top; ++d) {
      if (c.hs(d) != stable) {
        if (c.unstable_degrees.size() < 2) c.unstable_degrees.push_back(d);
        last = d;
      }
    }
    if (last >= lo) {
      c.witness.push_back({-last - n - 1, c.hs(last)});
      c.witness.push_back({-last - 1 - n - 1, c.hs(last + 1)});
    }
    os << "; stable value " << stable << ", dimension " << r.dimension;
  } else {
    // positive-dimensional support: report the first two distinct nonzero values
    long long prev = 0;
    for (int d = lo; c.witness.size() < 2 && d < lo + 64; ++d) {
      long long v = c.hs(d);
      if (v != 0 && v != prev) {
        c.witness.push_back({-d - n - 1, v});
        prev = v;
      }
    }
    os << "; Ext module has dimension " << r.dimension << " (support is not finite)";
  }
  c.certificate = os.str();
  return c;
}

template <Field F>
std::pair<SheafPresentation<F>, int> normalize(const SheafPresentation<F>& p) {
  auto c = classify_tail(p);
  if (!c.is_tail) throw PreconditionError("normalize needs a tail sheaf");
  int shift = c.k + p.n() + 1;
  return {twist(p, shift), shift};
}

template <Field F>
bool is_minimal(const SheafPresentation<F>& p) {
  auto c = classify_tail(p);
  if (!c.is_tail) throw PreconditionError("minimality is defined for tail sheaves");
  return c.minimal;
}

template <Field F>
bool is_level(const SheafPresentation<F>& p) {
  auto c = classify_tail(p);
  if (!c.is_tail) throw PreconditionError("levelness is defined for tail sheaves");
  return c.level;
}

struct RankBound {
  bool holds = false;
  bool tight = false;
  long long rank = 0;
  long long bound = 0;
};

template <Field F>
RankBound rank_bound_check(const SheafPresentation<F>& p, long long m) {
  RankBound b;
  b.rank = p.rank();
  b.bound = static_cast<long long>(p.n() - 1) * m;
  b.holds = b.rank >= b.bound;
  b.tight = b.rank == b.bound;
  return b;
}

template <Field F>
RankBound rank_bound_check(const SheafPresentation<F>& p) {
  auto c = classify_tail(p);
  return rank_bound_check(p, c.m);
}

struct SingularLocusReport {
  IdealGB<Rational> f0;
  ZeroLocus locus;
  long long ext_length = -1;     // stable value of HF_E; -1 if Supp E is not finite
  int ext_dimension = -1;        // projective dimension of Supp E
  bool codim_at_least_3 = false;
  bool reflexive_assumed = false;
  std::string note;
};

// Over Q only: point finding needs rational root isolation.
inline SingularLocusReport singular_locus(const SheafPresentation<Rational>& p) {
  SingularLocusReport r;
  r.f0 = fitting_ideal(p);
  r.locus = projective_zero_locus(r.f0);
  auto red = ext_module(p).hs.reduced();
  r.ext_dimension = red.dimension - 1;
  if (red.dimension <= 1) r.ext_length = red.dimension == 1 ? red.multiplicity() : 0;
  int dim = r.locus.kind == LocusKind::Empty ? -1 : r.locus.dimension;
  r.codim_at_least_3 = p.n() - dim >= 3;
  r.reflexive_assumed = r.codim_at_least_3 && check_injective(p).injective;
  r.note = r.reflexive_assumed ? "reflexive: assumed (injective, hd <= 1, codim Sing >= 3)" : "reflexive: necessary conditions fail";
  return r;
}

}  // namespace tailsheaf
