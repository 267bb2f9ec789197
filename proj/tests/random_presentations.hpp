#pragma once

// Seeded random presentations and block-diagonal minimal tails for the
// property tests and the acceptance run.

#include <algorithm>
#include <set>

#include "tailsheaf/construct.hpp"
#include "tailsheaf/fitting.hpp"

namespace randgen {

using tailsheaf::Poly;
using tailsheaf::Rational;
using tailsheaf::Rng;
using tailsheaf::SheafPresentation;

inline Poly<Rational> random_form(int nvars, int d, Rng& rng) {
  Poly<Rational> f(nvars);
  for (const auto& m : tailsheaf::monomial_basis(nvars, d))
    if (rng.uniform(0, 1)) f += Poly<Rational>(nvars, {{m, Rational(rng.uniform(-3, 3))}});
  return f;
}

// n in {2, 3}, s <= 3, q <= 12; twists a in {0, 1}, b in {1, 2, 3}. Retries
// until the matrix passes validation.
inline SheafPresentation<Rational> random_presentation(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  for (;;) {
    int n = rng.uniform(2, 3), s = rng.uniform(1, 3), q = rng.uniform(s + 1, 12);
    std::vector<int> a(s), b(q);
    for (auto& x : a) x = rng.uniform(0, 1);
    for (auto& x : b) x = rng.uniform(1, 3);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    SheafPresentation<Rational>::Matrix m(s, std::vector<Poly<Rational>>(q, Poly<Rational>(n + 1)));
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < q; ++j)
        if (b[j] > a[i] && rng.uniform(0, 9) < 7) m[i][j] = random_form(n + 1, b[j] - a[i], rng);
    try {
      SheafPresentation<Rational> p(n, a, b, m);
      tailsheaf::validate_presentation(p);
      return p;
    } catch (const tailsheaf::Error&) {
    }
  }
}

// A minimal m-tail on P^3 singular only at `point`: the curvilinear chain
// moved there by a coordinate change.
inline SheafPresentation<Rational> curvilinear_at(int m, const std::vector<Rational>& point) {
  auto c = tailsheaf::curvilinear<Rational>(3, m);
  auto a = tailsheaf::coordinates_sending_to_last(point);
  return SheafPresentation<Rational>(3, c.source_twists(), c.target_twists(), tailsheaf::change_coordinates<Rational>(c.matrix(), a));
}

inline std::vector<Rational> normalized(std::vector<Rational> p) {
  int last = static_cast<int>(p.size()) - 1;
  while (p[last].is_zero()) --last;
  Rational s = p[last];
  for (auto& c : p) c = c / s;
  return p;
}

// `count` distinct rational points of P^3 with small integer coordinates.
inline std::vector<std::vector<Rational>> distinct_points(int count, Rng& rng) {
  std::vector<std::vector<Rational>> out;
  std::set<std::string> seen;
  while (static_cast<int>(out.size()) < count) {
    std::vector<Rational> p(4);
    bool zero = true;
    for (auto& c : p) {
      c = Rational(rng.uniform(-3, 3));
      zero = zero && c.is_zero();
    }
    if (zero) continue;
    p = normalized(p);
    std::string key;
    for (auto& c : p) key += c.to_string() + ":";
    if (seen.insert(key).second) out.push_back(p);
  }
  return out;
}

}  // namespace randgen
