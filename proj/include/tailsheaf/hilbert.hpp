#pragma once

// Hilbert series of graded quotients S^r / M read off the lead-term module,
// via the pivot recursion N(J) = N(J + (x)) + z N(J : x) on monomial ideals.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "groebner.hpp"

namespace tailsheaf {

namespace detail {

using IntPoly = std::vector<long long>;  // coefficient of z^k at index k

inline void add_shifted(IntPoly& acc, const IntPoly& p, int shift, long long sign = 1) {
  if (acc.size() < p.size() + shift) acc.resize(p.size() + shift, 0);
  for (std::size_t k = 0; k < p.size(); ++k) acc[k + shift] += sign * p[k];
}

inline IntPoly times_one_minus_z_pow(const IntPoly& p, int e) {
  IntPoly out = p;
  out.resize(p.size() + e, 0);
  for (std::size_t k = out.size(); k-- > static_cast<std::size_t>(e);) out[k] -= out[k - e];
  return out;
}

inline std::vector<Monomial> minimalize(std::vector<Monomial> gens) {
  std::sort(gens.begin(), gens.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return grevlex_cmp(a, b) > 0;
  });
  std::vector<Monomial> out;
  for (const auto& g : gens) {
    bool redundant = false;
    for (const auto& h : out)
      if (h.divides(g)) { redundant = true; break; }
    if (!redundant) out.push_back(g);
  }
  return out;
}

// Numerator of the Hilbert series of S / J with denominator (1 - z)^N.
inline IntPoly monomial_numerator(std::vector<Monomial> gens) {
  gens = minimalize(std::move(gens));
  if (gens.empty()) return {1};
  bool coprime_all = true;
  int counts[kMaxVars] = {};
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (int v = 0; v < kMaxVars; ++v)
      if (gens[i].exp[v]) ++counts[v];
    for (std::size_t j = i + 1; j < gens.size() && coprime_all; ++j)
      if (!coprime(gens[i], gens[j])) coprime_all = false;
  }
  if (coprime_all) {
    IntPoly out{1};
    for (const auto& g : gens) out = times_one_minus_z_pow(out, g.degree);
    return out;
  }
  int pivot = static_cast<int>(std::max_element(counts, counts + kMaxVars) - counts);
  Monomial x = Monomial::var(pivot);
  std::vector<Monomial> sum{x}, quotient;
  for (const auto& g : gens) {
    if (!g.exp[pivot]) sum.push_back(g);
    quotient.push_back(g.exp[pivot] ? g / x : g);
  }
  IntPoly out = monomial_numerator(std::move(sum));
  add_shifted(out, monomial_numerator(std::move(quotient)), 1);
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

inline long long binomial(long long a, long long b) {
  if (b < 0 || a < b) return 0;
  long long r = 1;
  for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

}  // namespace detail

// HS(z) = z^low * (c_0 + c_1 z + ...) / (1 - z)^nvars.
class HilbertSeries {
 public:
  HilbertSeries() = default;
  HilbertSeries(int nvars, int low, std::vector<long long> coeffs) : nvars_(nvars), low_(low), coeffs_(std::move(coeffs)) {
    trim();
  }

  int nvars() const { return nvars_; }
  int low() const { return low_; }
  const std::vector<long long>& numerator() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  long long operator()(int d) const {
    long long v = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      long long e = d - low_ - static_cast<long long>(k);
      if (e >= 0) v += coeffs_[k] * detail::binomial(e + nvars_ - 1, nvars_ - 1);
    }
    return v;
  }

  // Writes HS = z^low * Q(z) / (1 - z)^dim with Q(1) != 0; dim is the Krull
  // dimension of the quotient (-1 for the zero module).
  struct Reduced {
    int dimension = -1;
    int low = 0;
    std::vector<long long> q;
    long long multiplicity() const {
      long long s = 0;
      for (auto c : q) s += c;
      return s;
    }
  };
  Reduced reduced() const {
    Reduced r;
    if (coeffs_.empty()) return r;
    std::vector<long long> q = coeffs_;
    int dim = nvars_;
    while (dim > 0) {
      long long s = 0;
      for (auto c : q) s += c;
      if (s != 0) break;
      // synthetic division by (1 - z)
      std::vector<long long> out(q.size() - 1);
      long long acc = 0;
      for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        acc += q[k];
        out[k] = acc;
      }
      q = std::move(out);
      --dim;
    }
    std::size_t first = 0;
    while (first < q.size() && q[first] == 0) ++first;
    r.dimension = dim;
    r.low = low_ + static_cast<int>(first);
    r.q.assign(q.begin() + static_cast<std::ptrdiff_t>(first), q.end());
    while (!r.q.empty() && r.q.back() == 0) r.q.pop_back();
    return r;
  }
  int dimension() const { return reduced().dimension; }

  std::string to_string() const {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      long long c = coeffs_[k];
      if (!c) continue;
      int e = low_ + static_cast<int>(k);
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      long long a = c < 0 ? -c : c;
      if (e == 0) os << a;
      else {
        if (a != 1) os << a << "*";
        os << "z";
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    if (first) os << "0";
    os << ")/(1-z)^" << nvars_;
    return os.str();
  }

  friend bool operator==(const HilbertSeries& a, const HilbertSeries& b) {
    return a.nvars_ == b.nvars_ && (a.coeffs_.empty() ? b.coeffs_.empty() : a.low_ == b.low_ && a.coeffs_ == b.coeffs_);
  }

 private:
  void trim() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    low_ += static_cast<int>(first);
    while (coeffs_.back() == 0) coeffs_.pop_back();
  }

  int nvars_ = 0;
  int low_ = 0;
  std::vector<long long> coeffs_;
};

template <Field F>
HilbertSeries hilbert_series(const ModuleGB<F>& gb) {
  auto leads = gb.lead_monomials();
  if (gb.rank() == 0) return HilbertSeries(gb.nvars(), 0, {});
  int low = *std::min_element(gb.generator_degrees().begin(), gb.generator_degrees().end());
  detail::IntPoly total;
  for (int c = 0; c < gb.rank(); ++c)
    detail::add_shifted(total, detail::monomial_numerator(leads[c]), gb.generator_degrees()[c] - low);
  return HilbertSeries(gb.nvars(), low, std::move(total));
}

template <Field F>
HilbertSeries hilbert_series(const IdealGB<F>& gb) {
  if (!gb.homogeneous()) throw PreconditionError("Hilbert series needs a homogeneous ideal");
  return HilbertSeries(gb.nvars(), 0, detail::monomial_numerator(gb.lead_monomials()));
}

}  // namespace tailsheaf
