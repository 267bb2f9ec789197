#pragma once

// Sparse multivariate polynomials in x0..x{N-1} under graded reverse
// lexicographic order with x0 > x1 > ... , graded pieces, and linear
// coordinate changes.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace tailsheaf {

inline constexpr int kMaxVars = 10;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};
  int degree = 0;

  static Monomial one() { return {}; }
  static Monomial var(int i, int power = 1) {
    Monomial m;
    m.exp[i] = static_cast<std::uint16_t>(power);
    m.degree = power;
    return m;
  }
  static Monomial from_exponents(const std::vector<int>& e) {
    if (e.size() > static_cast<std::size_t>(kMaxVars)) throw PreconditionError("too many variables");
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0) throw PreconditionError("negative exponent");
      m.exp[i] = static_cast<std::uint16_t>(e[i]);
      m.degree += e[i];
    }
    return m;
  }

  bool divides(const Monomial& o) const {
    if (degree > o.degree) return false;
    for (int i = 0; i < kMaxVars; ++i)
      if (exp[i] > o.exp[i]) return false;
    return true;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(a.exp[i] + b.exp[i]);
    m.degree = a.degree + b.degree;
    return m;
  }
  // a / b, assuming b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(a.exp[i] - b.exp[i]);
    m.degree = a.degree - b.degree;
    return m;
  }
  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) {
      m.exp[i] = std::max(a.exp[i], b.exp[i]);
      m.degree += m.exp[i];
    }
    return m;
  }
  friend bool coprime(const Monomial& a, const Monomial& b) {
    for (int i = 0; i < kMaxVars; ++i)
      if (a.exp[i] && b.exp[i]) return false;
    return true;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }

  // Graded reverse lexicographic comparison: -1, 0, +1.
  friend int grevlex_cmp(const Monomial& a, const Monomial& b) {
    if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
    for (int i = kMaxVars - 1; i >= 0; --i)
      if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
    return 0;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) { return grevlex_cmp(a, b) < 0; }

  std::string to_string(int nvars) const {
    if (degree == 0) return "1";
    std::string s;
    for (int i = 0; i < nvars; ++i) {
      if (!exp[i]) continue;
      if (!s.empty()) s += '*';
      s += 'x' + std::to_string(i);
      if (exp[i] > 1) s += '^' + std::to_string(exp[i]);
    }
    return s;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = 1469598103934665603ull;
    for (auto e : m.exp) h = (h ^ e) * 1099511628211ull;
    return h;
  }
};

// Number of monomials of degree d in nvars variables.
inline long long graded_dimension(int nvars, int d) {
  if (d < 0) return 0;
  if (nvars == 0) return d == 0 ? 1 : 0;
  long long r = 1;
  for (int i = 1; i < nvars; ++i) r = r * (d + i) / i;
  return r;
}

// All monomials of degree d, largest first.
inline std::vector<Monomial> monomial_basis(int nvars, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  if (nvars == 0) {
    if (d == 0) out.push_back(Monomial::one());
    return out;
  }
  std::vector<int> e(nvars, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nvars - 1) {
      e[var] = left;
      out.push_back(Monomial::from_exponents(e));
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      rec(var + 1, left - k);
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return b < a; });
  return out;
}

using MonomialIndex = std::unordered_map<Monomial, int, MonomialHash>;

inline MonomialIndex index_of(const std::vector<Monomial>& basis) {
  MonomialIndex idx;
  idx.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], static_cast<int>(i));
  return idx;
}

template <Field F>
class Poly {
 public:
  using Term = std::pair<Monomial, F>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {
    if (nvars < 0 || nvars > kMaxVars) throw PreconditionError("unsupported number of variables");
  }
  Poly(int nvars, const F& c) : Poly(nvars) {
    if (!c.is_zero()) terms_.emplace_back(Monomial::one(), c);
  }
  Poly(int nvars, std::vector<Term> terms) : Poly(nvars) {
    terms_ = std::move(terms);
    normalize();
  }
  static Poly variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw PreconditionError("variable index out of range");
    Poly p(nvars);
    p.terms_.emplace_back(Monomial::var(i), F(1));
    return p;
  }
  static Poly monomial(int nvars, const Monomial& m, const F& c = F(1)) {
    Poly p(nvars);
    if (!c.is_zero()) p.terms_.emplace_back(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Monomial& lead_monomial() const { return terms_.front().first; }
  const F& lead_coefficient() const { return terms_.front().second; }

  // Highest total degree (-1 for the zero polynomial).
  int degree() const { return terms_.empty() ? -1 : terms_.front().first.degree; }
  bool is_homogeneous() const {
    for (const auto& t : terms_)
      if (t.first.degree != terms_.front().first.degree) return false;
    return true;
  }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.degree == 0); }

  F coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.first == m) return t.second;
    return F(0);
  }

  Poly& operator+=(const Poly& o) { return merge(o, F(1)); }
  Poly& operator-=(const Poly& o) { return merge(o, F(-1)); }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    check_same(a, b);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.emplace_back(s.first * t.first, s.second * t.second);
    return Poly(a.nvars_, std::move(out));
  }
  friend Poly operator*(const F& c, Poly a) {
    if (c.is_zero()) return Poly(a.nvars_);
    for (auto& t : a.terms_) t.second *= c;
    return a;
  }
  Poly times(const Monomial& m, const F& c = F(1)) const {
    Poly r(nvars_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
    return r;  // multiplication by a monomial preserves the order
  }
  Poly pow(int e) const {
    Poly r(nvars_, F(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].first == b.terms_[i].first) || !(a.terms_[i].second == b.terms_[i].second)) return false;
    return true;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    F inv = F(1) / lead_coefficient();
    return inv * *this;
  }

  F evaluate(const std::vector<F>& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw PreconditionError("evaluation point has wrong length");
    F sum(0);
    for (const auto& [m, c] : terms_) {
      F v = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < m.exp[i]; ++k) v *= point[i];
      sum += v;
    }
    return sum;
  }

  // Substitute each variable x_i by images[i] (all in one target ring).
  Poly substitute(const std::vector<Poly>& images, int target_nvars) const {
    if (static_cast<int>(images.size()) != nvars_) throw PreconditionError("substitution needs one image per variable");
    std::vector<std::vector<Poly>> powers(nvars_);
    Poly out(target_nvars);
    for (const auto& [m, c] : terms_) {
      Poly term(target_nvars, c);
      for (int i = 0; i < nvars_; ++i) {
        if (!m.exp[i]) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(Poly(target_nvars, F(1)));
        while (static_cast<int>(pw.size()) <= m.exp[i]) pw.push_back(pw.back() * images[i]);
        term = term * pw[m.exp[i]];
      }
      out += term;
    }
    return out;
  }

  // Set variable j to 1 and drop it, giving a polynomial in nvars-1 variables.
  Poly dehomogenize(int j) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      Monomial r;
      int k = 0;
      for (int i = 0; i < nvars_; ++i) {
        if (i == j) continue;
        r.exp[k++] = m.exp[i];
        r.degree += m.exp[i];
      }
      out.emplace_back(r, c);
    }
    return Poly(nvars_ - 1, std::move(out));
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = c.to_string();
      bool neg = !cs.empty() && cs[0] == '-';
      if (neg) cs.erase(0, 1);
      if (first) {
        if (neg) s += '-';
      } else {
        s += neg ? " - " : " + ";
      }
      first = false;
      if (m.degree == 0) {
        s += cs;
      } else {
        if (cs != "1") s += cs + '*';
        s += m.to_string(nvars_);
      }
    }
    return s;
  }

 private:
  static void check_same(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw PreconditionError("polynomials from different rings");
  }
  Poly& merge(const Poly& o, const F& sign) {
    check_same(*this, o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      int c = i >= terms_.size() ? -1 : j >= o.terms_.size() ? 1 : grevlex_cmp(terms_[i].first, o.terms_[j].first);
      if (c > 0) {
        out.push_back(std::move(terms_[i++]));
      } else if (c < 0) {
        out.emplace_back(o.terms_[j].first, sign * o.terms_[j].second);
        ++j;
      } else {
        F v = terms_[i].second + sign * o.terms_[j].second;
        if (!v.is_zero()) out.emplace_back(terms_[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    terms_ = std::move(out);
    return *this;
  }
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return b.first < a.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
      } else {
        if (!out.empty() && out.back().second.is_zero()) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().second.is_zero()) out.pop_back();
    terms_ = std::move(out);
  }

  int nvars_ = 0;
  std::vector<Term> terms_;
};

// Matrix of multiplication by a homogeneous f from S_d to S_{d+deg f}, columns
// indexed by monomial_basis(d) and rows by monomial_basis(d + deg f).
template <Field F>
DenseMatrix<F> mult_map(const Poly<F>& f, int d, int degree_of_f) {
  if (!f.is_zero() && (!f.is_homogeneous() || f.degree() != degree_of_f)) {
    throw PreconditionError("mult_map needs a homogeneous polynomial of the stated degree");
  }
  auto src = monomial_basis(f.nvars(), d);
  auto dst = monomial_basis(f.nvars(), d + degree_of_f);
  auto idx = index_of(dst);
  DenseMatrix<F> m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j)
    for (const auto& [mono, c] : f.terms()) m(idx.at(mono * src[j]), static_cast<int>(j)) = c;
  return m;
}

template <Field F>
DenseMatrix<F> mult_map(const Poly<F>& f, int d) {
  if (f.is_zero()) throw PreconditionError("degree of the zero polynomial is ambiguous; pass it explicitly");
  return mult_map(f, d, f.degree());
}

// x_i -> sum_j T(i, j) x_j.
template <Field F>
Poly<F> change_coordinates(const Poly<F>& g, const DenseMatrix<F>& t) {
  int n = g.nvars();
  if (t.rows() != n || t.cols() != n) throw PreconditionError("coordinate change has wrong size");
  if (t.rank() != n) throw PreconditionError("coordinate change is singular");
  std::vector<Poly<F>> images;
  images.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<typename Poly<F>::Term> terms;
    for (int j = 0; j < n; ++j)
      if (!t(i, j).is_zero()) terms.emplace_back(Monomial::var(j), t(i, j));
    images.emplace_back(n, std::move(terms));
  }
  return g.substitute(images, n);
}

// Linear form sum_i c_i x_i as a coefficient vector, and back.
template <Field F>
std::vector<F> linear_coefficients(const Poly<F>& f) {
  std::vector<F> c(f.nvars());
  for (const auto& [m, v] : f.terms()) {
    if (m.degree != 1) throw PreconditionError("expected a linear form");
    for (int i = 0; i < f.nvars(); ++i)
      if (m.exp[i]) c[i] = v;
  }
  return c;
}

template <Field F>
Poly<F> linear_form(const std::vector<F>& c) {
  int n = static_cast<int>(c.size());
  std::vector<typename Poly<F>::Term> terms;
  for (int i = 0; i < n; ++i)
    if (!c[i].is_zero()) terms.emplace_back(Monomial::var(i), c[i]);
  return Poly<F>(n, std::move(terms));
}

namespace detail {

// Recursive-descent reader for one polynomial; positions are reported relative
// to `base_column` so callers can embed it in a line-based format.
template <Field F>
class PolyReader {
 public:
  PolyReader(std::string_view text, int nvars, int line, int base_column)
      : s_(text), nvars_(nvars), line_(line), base_(base_column) {}

  Poly<F> read() {
    skip();
    if (pos_ >= s_.size()) fail("empty polynomial");
    std::vector<typename Poly<F>::Term> terms;
    bool first = true;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      F sign(1);
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        if (s_[pos_] == '-') sign = F(-1);
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      terms.push_back(read_term(sign));
    }
    return Poly<F>(nvars_, std::move(terms));
  }

 private:
  typename Poly<F>::Term read_term(F coef) {
    Monomial m;
    bool any = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coef *= read_number();
      } else if (c == 'x') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("variable needs an index, e.g. x0");
        int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
        if (v >= nvars_) fail("variable x" + std::to_string(v) + " outside the ring");
        int e = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          std::size_t es = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (es == pos_) fail("exponent expected after '^'");
          e = std::stoi(std::string(s_.substr(es, pos_ - es)));
        }
        m = m * Monomial::var(v, e);
      } else if (c == '*') {
        if (!any) fail("unexpected '*'");
        ++pos_;
        continue;
      } else if (c == '+' || c == '-') {
        break;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      any = true;
    }
    if (!any) fail("missing term");
    return {m, coef};
  }

  F read_number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      std::size_t ds = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (ds == pos_) fail("denominator expected after '/'");
    }
    try {
      return F::parse(s_.substr(start, pos_ - start));
    } catch (const PreconditionError& e) {
      fail(e.what());
    }
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, base_ + static_cast<int>(pos_) + 1);
  }

  std::string_view s_;
  int nvars_;
  int line_;
  int base_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <Field F>
Poly<F> parse_poly(std::string_view text, int nvars, int line = 1, int base_column = 0) {
  return detail::PolyReader<F>(text, nvars, line, base_column).read();
}

}  // namespace tailsheaf
