#pragma once

// Buchberger's algorithm for submodules of graded free modules
// F = S(-d_0) + ... + S(-d_{r-1}); ideals are the rank-one case.
//
// Terms are (monomial, component) and are ordered by shifted degree
// (monomial degree + d_comp), then graded reverse lex on the monomial, then by
// component index (smaller index is larger). The shifted degree comes first so
// homogeneous inputs are processed degree by degree.

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace tailsheaf {

template <Field F>
struct ModuleTerm {
  Monomial mono;
  int comp = 0;
  F coef;
};

class ModuleOrder {
 public:
  ModuleOrder() = default;
  explicit ModuleOrder(std::vector<int> shifts) : shifts_(std::move(shifts)) {}

  int shift(int comp) const { return shifts_[comp]; }
  int rank() const { return static_cast<int>(shifts_.size()); }
  const std::vector<int>& shifts() const { return shifts_; }
  int degree(const Monomial& m, int comp) const { return m.degree + shifts_[comp]; }

  int cmp(const Monomial& a, int ca, const Monomial& b, int cb) const {
    int da = degree(a, ca), db = degree(b, cb);
    if (da != db) return da > db ? 1 : -1;
    int c = grevlex_cmp(a, b);
    if (c) return c;
    if (ca != cb) return ca < cb ? 1 : -1;
    return 0;
  }

 private:
  std::vector<int> shifts_;
};

// A vector of polynomials stored as one term list sorted decreasingly.
template <Field F>
class ModuleElement {
 public:
  using Term = ModuleTerm<F>;

  ModuleElement() = default;
  ModuleElement(std::vector<Term> terms, const ModuleOrder& order) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(), [&](const Term& a, const Term& b) { return order.cmp(a.mono, a.comp, b.mono, b.comp) > 0; });
    std::vector<Term> out;
    for (auto& t : terms_) {
      if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
        out.back().coef += t.coef;
        if (out.back().coef.is_zero()) out.pop_back();
      } else if (!t.coef.is_zero()) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  static ModuleElement from_polys(const std::vector<Poly<F>>& entries, const ModuleOrder& order) {
    std::vector<Term> terms;
    for (int c = 0; c < static_cast<int>(entries.size()); ++c)
      for (const auto& [m, v] : entries[c].terms()) terms.push_back({m, c, v});
    return ModuleElement(std::move(terms), order);
  }

  std::vector<Poly<F>> to_polys(int nvars, int rank) const {
    std::vector<std::vector<typename Poly<F>::Term>> per(rank);
    for (const auto& t : terms_) per[t.comp].emplace_back(t.mono, t.coef);
    std::vector<Poly<F>> out;
    out.reserve(rank);
    for (auto& p : per) out.emplace_back(nvars, std::move(p));
    return out;
  }

  bool is_zero() const { return terms_.empty(); }
  const Term& lead() const { return terms_.front(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::vector<Term>& terms() { return terms_; }

  void make_monic() {
    if (terms_.empty() || terms_.front().coef.is_one()) return;
    F inv = F(1) / terms_.front().coef;
    for (auto& t : terms_) t.coef *= inv;
  }

  // this -= c * m * g, keeping the first `keep` terms of this untouched
  // (they are known to be larger than everything in m * g).
  void subtract_multiple(const F& c, const Monomial& m, const ModuleElement& g, const ModuleOrder& order, std::size_t keep = 0) {
    std::vector<Term> out;
    out.reserve(terms_.size() + g.terms_.size());
    for (std::size_t k = 0; k < keep; ++k) out.push_back(std::move(terms_[k]));
    std::size_t i = keep, j = 0;
    while (i < terms_.size() || j < g.terms_.size()) {
      int cmp;
      Monomial gm;
      if (j < g.terms_.size()) gm = g.terms_[j].mono * m;
      if (i >= terms_.size()) cmp = -1;
      else if (j >= g.terms_.size()) cmp = 1;
      else cmp = order.cmp(terms_[i].mono, terms_[i].comp, gm, g.terms_[j].comp);
      if (cmp > 0) {
        out.push_back(std::move(terms_[i++]));
      } else if (cmp < 0) {
        out.push_back({gm, g.terms_[j].comp, -(c * g.terms_[j].coef)});
        ++j;
      } else {
        F v = terms_[i].coef - c * g.terms_[j].coef;
        if (!v.is_zero()) out.push_back({terms_[i].mono, terms_[i].comp, std::move(v)});
        ++i;
        ++j;
      }
    }
    terms_ = std::move(out);
  }

  friend bool operator==(const ModuleElement& a, const ModuleElement& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const auto &x = a.terms_[i], &y = b.terms_[i];
      if (x.comp != y.comp || !(x.mono == y.mono) || !(x.coef == y.coef)) return false;
    }
    return true;
  }

 private:
  std::vector<Term> terms_;
};

template <Field F>
class GroebnerEngine {
 public:
  using Element = ModuleElement<F>;

  GroebnerEngine(const ModuleOrder& order, bool rank_one) : order_(order), rank_one_(rank_one) {}

  // Full normal form with respect to `basis` (leads assumed monic).
  Element reduce(Element f, const std::vector<Element>& basis) const {
    std::size_t pos = 0;
    while (pos < f.terms().size()) {
      const auto& t = f.terms()[pos];
      const Element* red = nullptr;
      for (const auto& g : basis) {
        const auto& l = g.lead();
        if (l.comp == t.comp && l.mono.divides(t.mono)) {
          red = &g;
          break;
        }
      }
      if (!red) {
        ++pos;
        continue;
      }
      F c = t.coef / red->lead().coef;
      Monomial m = t.mono / red->lead().mono;
      f.subtract_multiple(c, m, *red, order_, pos);
    }
    return f;
  }

  std::vector<Element> run(std::vector<Element> gens) {
    std::vector<Element> basis;
    std::vector<Pair> pairs;
    // Inter-reduce the input first so trivial redundancy never enters the pair set.
    std::sort(gens.begin(), gens.end(), [&](const Element& a, const Element& b) { return less_lead(a, b); });
    for (auto& g : gens) {
      if (g.is_zero()) continue;
      Element r = reduce(std::move(g), basis);
      if (r.is_zero()) continue;
      r.make_monic();
      add(std::move(r), basis, pairs);
    }
    while (!pairs.empty()) {
      auto it = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        int c = order_.cmp(a.lcm, a.comp, b.lcm, b.comp);
        if (c) return c < 0;
        return std::tie(a.j, a.i) < std::tie(b.j, b.i);
      });
      Pair p = *it;
      pairs.erase(it);
      Element s = s_vector(basis[p.i], basis[p.j], p.lcm);
      s = reduce(std::move(s), basis);
      if (s.is_zero()) continue;
      s.make_monic();
      add(std::move(s), basis, pairs);
    }
    return finalize(std::move(basis));
  }

 private:
  struct Pair {
    int i, j;
    Monomial lcm;
    int comp;
    int degree;
  };

  bool less_lead(const Element& a, const Element& b) const {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() && b.is_zero() ? true : false;
    return order_.cmp(a.lead().mono, a.lead().comp, b.lead().mono, b.lead().comp) < 0;
  }

  Element s_vector(const Element& f, const Element& g, const Monomial& l) const {
    Element s = f;
    s.terms().clear();
    for (const auto& t : f.terms()) s.terms().push_back({t.mono * (l / f.lead().mono), t.comp, t.coef});
    s.subtract_multiple(F(1), l / g.lead().mono, g, order_);
    return s;
  }

  // Gebauer-Moeller update.
  void add(Element h, std::vector<Element>& basis, std::vector<Pair>& pairs) {
    const int k = static_cast<int>(basis.size());
    const Monomial hl = h.lead().mono;
    const int hc = h.lead().comp;

    std::vector<Pair> fresh;
    for (int i = 0; i < k; ++i) {
      if (!alive_[i] || basis[i].lead().comp != hc) continue;
      Monomial l = lcm(basis[i].lead().mono, hl);
      fresh.push_back({i, k, l, hc, order_.degree(l, hc)});
    }
    // Chain criterion among the new pairs: drop (i,k) if some (j,k) has a lcm
    // strictly dividing it; among equal lcms keep one, preferring a coprime pair.
    std::vector<bool> keep(fresh.size(), true);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = 0; b < fresh.size(); ++b) {
        if (a == b || !keep[b]) continue;
        if (fresh[b].lcm.divides(fresh[a].lcm) && !(fresh[b].lcm == fresh[a].lcm)) {
          keep[a] = false;
          break;
        }
      }
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      if (!keep[a]) continue;
      bool dup = false;
      for (auto& q : kept)
        if (q.lcm == fresh[a].lcm) {
          dup = true;
          if (rank_one_ && coprime(basis[fresh[a].i].lead().mono, hl)) q = fresh[a];
          break;
        }
      if (!dup) kept.push_back(fresh[a]);
    }
    // Product criterion (ideals only).
    std::erase_if(kept, [&](const Pair& p) { return rank_one_ && coprime(basis[p.i].lead().mono, hl); });
    // Old pairs made redundant by h.
    std::erase_if(pairs, [&](const Pair& p) {
      if (p.comp != hc || !hl.divides(p.lcm)) return false;
      Monomial li = lcm(basis[p.i].lead().mono, hl);
      Monomial lj = lcm(basis[p.j].lead().mono, hl);
      return !(li == p.lcm) && !(lj == p.lcm);
    });
    pairs.insert(pairs.end(), kept.begin(), kept.end());
    // Elements whose lead h divides stay for pair bookkeeping but spawn no new pairs.
    for (int i = 0; i < k; ++i)
      if (alive_[i] && basis[i].lead().comp == hc && hl.divides(basis[i].lead().mono)) alive_[i] = false;
    basis.push_back(std::move(h));
    alive_.push_back(true);
  }

  std::vector<Element> finalize(std::vector<Element> basis) const {
    std::vector<Element> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
        if (i == j) continue;
        const auto &li = basis[i].lead(), &lj = basis[j].lead();
        if (li.comp != lj.comp || !lj.mono.divides(li.mono)) continue;
        if (!(lj.mono == li.mono) || j < i) redundant = true;
      }
      if (!redundant) minimal.push_back(basis[i]);
    }
    std::sort(minimal.begin(), minimal.end(), [&](const Element& a, const Element& b) { return less_lead(b, a); });
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<Element> others;
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      Element lead_only = minimal[i];
      auto& terms = lead_only.terms();
      Element tail = minimal[i];
      tail.terms().erase(tail.terms().begin());
      tail = reduce(std::move(tail), others);
      terms.resize(1);
      terms.insert(terms.end(), tail.terms().begin(), tail.terms().end());
      lead_only.make_monic();
      minimal[i] = std::move(lead_only);
    }
    return minimal;
  }

  ModuleOrder order_;
  bool rank_one_;
  std::vector<bool> alive_;
};

// Reduced Groebner basis of a graded submodule of S(-d_0) + ... + S(-d_{r-1}).
template <Field F>
class ModuleGB {
 public:
  ModuleGB() = default;

  // Each generator is a vector of `rank` polynomials and must be homogeneous:
  // the entry in component c is zero or homogeneous of degree deg - d_c.
  ModuleGB(int nvars, std::vector<int> generator_degrees, const std::vector<std::vector<Poly<F>>>& gens)
      : nvars_(nvars), order_(std::move(generator_degrees)) {
    const int rank = order_.rank();
    std::vector<ModuleElement<F>> elements;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& v = gens[g];
      if (static_cast<int>(v.size()) != rank) throw PreconditionError("module generator has wrong length");
      std::optional<int> deg;
      for (int c = 0; c < rank; ++c) {
        if (v[c].nvars() != nvars) throw PreconditionError("module generator from a different ring");
        if (v[c].is_zero()) continue;
        if (!v[c].is_homogeneous()) throw PreconditionError("inhomogeneous module generator " + std::to_string(g));
        int d = v[c].degree() + order_.shift(c);
        if (deg && *deg != d) throw PreconditionError("inhomogeneous module generator " + std::to_string(g));
        deg = d;
      }
      if (!deg) continue;
      generators_.push_back(v);
      elements.push_back(ModuleElement<F>::from_polys(v, order_));
    }
    basis_ = GroebnerEngine<F>(order_, rank == 1).run(std::move(elements));
  }

  int nvars() const { return nvars_; }
  int rank() const { return order_.rank(); }
  const ModuleOrder& order() const { return order_; }
  const std::vector<int>& generator_degrees() const { return order_.shifts(); }
  const std::vector<ModuleElement<F>>& basis() const { return basis_; }
  const std::vector<std::vector<Poly<F>>>& generators() const { return generators_; }

  std::vector<std::vector<Poly<F>>> basis_vectors() const {
    std::vector<std::vector<Poly<F>>> out;
    for (const auto& b : basis_) out.push_back(b.to_polys(nvars_, rank()));
    return out;
  }

  // Lead monomials grouped by component.
  std::vector<std::vector<Monomial>> lead_monomials() const {
    std::vector<std::vector<Monomial>> out(rank());
    for (const auto& b : basis_) out[b.lead().comp].push_back(b.lead().mono);
    return out;
  }

  std::vector<Poly<F>> normal_form(const std::vector<Poly<F>>& v) const {
    auto e = ModuleElement<F>::from_polys(v, order_);
    e = GroebnerEngine<F>(order_, rank() == 1).reduce(std::move(e), basis_);
    return e.to_polys(nvars_, rank());
  }
  bool contains(const std::vector<Poly<F>>& v) const {
    for (const auto& p : normal_form(v))
      if (!p.is_zero()) return false;
    return true;
  }

  // Module Buchberger criterion, checked from scratch.
  bool verify() const {
    GroebnerEngine<F> engine(order_, rank() == 1);
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i + 1; j < basis_.size(); ++j) {
        const auto &a = basis_[i].lead(), &b = basis_[j].lead();
        if (a.comp != b.comp) continue;
        Monomial l = lcm(a.mono, b.mono);
        ModuleElement<F> s = basis_[i];
        s.terms().clear();
        for (const auto& t : basis_[i].terms()) s.terms().push_back({t.mono * (l / a.mono), t.comp, t.coef});
        s.subtract_multiple(F(1) / b.coef * a.coef, l / b.mono, basis_[j], order_);
        if (!engine.reduce(std::move(s), basis_).is_zero()) return false;
      }
    return true;
  }

 private:
  int nvars_ = 0;
  ModuleOrder order_;
  std::vector<std::vector<Poly<F>>> generators_;
  std::vector<ModuleElement<F>> basis_;
};

// Reduced Groebner basis of an ideal; inputs may be inhomogeneous (affine charts).
template <Field F>
class IdealGB {
 public:
  IdealGB() = default;
  IdealGB(int nvars, const std::vector<Poly<F>>& gens) : nvars_(nvars), order_(std::vector<int>{0}) {
    std::vector<ModuleElement<F>> elements;
    homogeneous_ = true;
    for (const auto& g : gens) {
      if (g.nvars() != nvars) throw PreconditionError("ideal generators from different rings");
      if (g.is_zero()) continue;
      if (!g.is_homogeneous()) homogeneous_ = false;
      generators_.push_back(g);
      elements.push_back(ModuleElement<F>::from_polys({g}, order_));
    }
    for (auto& b : GroebnerEngine<F>(order_, true).run(std::move(elements))) basis_.push_back(b.to_polys(nvars_, 1)[0]);
  }
  explicit IdealGB(const std::vector<Poly<F>>& gens) : IdealGB(common_nvars(gens), gens) {}

  int nvars() const { return nvars_; }
  bool homogeneous() const { return homogeneous_; }
  const std::vector<Poly<F>>& generators() const { return generators_; }
  const std::vector<Poly<F>>& basis() const { return basis_; }
  std::vector<Monomial> lead_monomials() const {
    std::vector<Monomial> out;
    for (const auto& b : basis_) out.push_back(b.lead_monomial());
    return out;
  }
  bool is_unit() const { return basis_.size() == 1 && basis_[0].is_constant(); }
  bool is_zero_ideal() const { return basis_.empty(); }

  Poly<F> normal_form(const Poly<F>& f) const {
    auto e = ModuleElement<F>::from_polys({f}, order_);
    std::vector<ModuleElement<F>> b;
    for (const auto& p : basis_) b.push_back(ModuleElement<F>::from_polys({p}, order_));
    return GroebnerEngine<F>(order_, true).reduce(std::move(e), b).to_polys(nvars_, 1)[0];
  }
  bool contains(const Poly<F>& f) const { return normal_form(f).is_zero(); }

  // Reduced bases are unique, so ideal equality is basis equality.
  friend bool operator==(const IdealGB& a, const IdealGB& b) { return a.nvars_ == b.nvars_ && a.basis_ == b.basis_; }

 private:
  static int common_nvars(const std::vector<Poly<F>>& gens) {
    if (gens.empty()) throw PreconditionError("cannot infer the ring of an empty generator list");
    return gens.front().nvars();
  }

  int nvars_ = 0;
  ModuleOrder order_;
  bool homogeneous_ = true;
  std::vector<Poly<F>> generators_;
  std::vector<Poly<F>> basis_;
};

}  // namespace tailsheaf
