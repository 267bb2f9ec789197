#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's elimination, Groebner or Hilbert code.

#include <gmpxx.h>

#include <map>
#include <vector>

#include "tailsheaf/presentation.hpp"

namespace oracle {

using tailsheaf::Monomial;
using tailsheaf::Poly;
using tailsheaf::Rational;

inline long long binomial(long long a, long long b) {
  if (b < 0 || a < b) return 0;
  long long r = 1;
  for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Hilbert polynomial of P^n evaluated anywhere: (t+1)...(t+n)/n!.
inline mpq_class hilbert_poly(int n, long long t) {
  mpq_class r = 1;
  for (int i = 1; i <= n; ++i) r = r * mpq_class(static_cast<long>(t + i)) / i;
  return r;
}

// Schoolbook Gauss-Jordan on a copy; deliberately the most naive version.
inline int rank(std::vector<std::vector<mpq_class>> a) {
  int rows = static_cast<int>(a.size());
  if (!rows) return 0;
  int cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

// All monomials in `nvars` variables of total degree exactly d, any order.
inline std::vector<Monomial> monomials(int nvars, int d) {
  std::vector<Monomial> out;
  std::vector<int> e(nvars, 0);
  auto rec = [&](auto&& self, int v, int left) -> void {
    if (v == nvars - 1) {
      e[v] = left;
      out.push_back(Monomial::from_exponents(e));
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[v] = k;
      self(self, v + 1, left - k);
    }
  };
  if (d >= 0 && nvars > 0) rec(rec, 0, d);
  return out;
}

inline std::vector<Monomial> monomials_up_to(int nvars, int d) {
  std::vector<Monomial> out;
  for (int k = 0; k <= d; ++k)
    for (auto& m : monomials(nvars, k)) out.push_back(m);
  return out;
}

// Rows of coefficient vectors of the polynomials in `polys` over the listed monomials.
inline std::vector<std::vector<mpq_class>> coefficient_rows(const std::vector<Poly<Rational>>& polys, const std::vector<Monomial>& basis) {
  std::map<std::vector<int>, int> idx;
  auto key = [](const Monomial& m) { return std::vector<int>(m.exp.begin(), m.exp.end()); };
  for (std::size_t i = 0; i < basis.size(); ++i) idx[key(basis[i])] = static_cast<int>(i);
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& p : polys) {
    std::vector<mpq_class> r(basis.size(), 0);
    for (const auto& [m, c] : p.terms()) r[idx.at(key(m))] = c.value();
    rows.push_back(std::move(r));
  }
  return rows;
}

// dim (S/I)_d for a homogeneous ideal by spanning I_d with monomial multiples.
inline long long quotient_dimension(int nvars, const std::vector<Poly<Rational>>& gens, int d) {
  auto basis = monomials(nvars, d);
  std::vector<Poly<Rational>> span;
  for (const auto& g : gens) {
    if (g.is_zero() || g.degree() > d) continue;
    for (auto& m : monomials(nvars, d - g.degree())) span.push_back(g.times(m));
  }
  if (span.empty()) return static_cast<long long>(basis.size());
  return static_cast<long long>(basis.size()) - rank(coefficient_rows(span, basis));
}

// Colength of an affine ideal certified without Groebner bases: checks that
// every monomial of degree `c` lies in the span of multiples g*m of degree <= D
// (so m^c is inside I), that `candidates` are independent modulo that span, and
// that together they span all monomials of degree < c. Returns -1 if a check fails.
inline long long certified_colength(int nvars, const std::vector<Poly<Rational>>& gens, const std::vector<Monomial>& candidates, int c, int D) {
  auto basis = monomials_up_to(nvars, D);
  std::vector<Poly<Rational>> span;
  for (const auto& g : gens)
    for (auto& m : monomials_up_to(nvars, D - g.degree())) span.push_back(g.times(m));
  int r0 = rank(coefficient_rows(span, basis));
  auto with = [&](const std::vector<Monomial>& extra) {
    auto rows = span;
    for (const auto& m : extra) rows.push_back(Poly<Rational>::monomial(nvars, m));
    return rank(coefficient_rows(rows, basis));
  };
  for (const auto& m : monomials(nvars, c))
    if (with({m}) != r0) return -1;
  int rc = with(candidates);
  if (rc != r0 + static_cast<int>(candidates.size())) return -1;
  for (const auto& m : monomials_up_to(nvars, c - 1)) {
    auto ext = candidates;
    ext.push_back(m);
    if (with(ext) != rc) return -1;
  }
  return static_cast<long long>(candidates.size());
}

inline std::vector<std::vector<mpq_class>> to_mpq(const tailsheaf::DenseMatrix<Rational>& m) {
  std::vector<std::vector<mpq_class>> out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).value();
  return out;
}


// Rank of u -> u * M on degree-d parts, one block per row of M:
// (+) S_{d - shift_i} for rows i into (+) S_{d + out_j}. With `rows_in` false
// the roles of rows and columns are swapped (the transpose map).
inline int block_map_rank(const std::vector<std::vector<Poly<Rational>>>& m, int nvars, const std::vector<int>& in_deg,
                          const std::vector<int>& out_deg, bool rows_in) {
  int ni = static_cast<int>(in_deg.size()), no = static_cast<int>(out_deg.size());
  std::vector<std::vector<Monomial>> out_basis;
  std::vector<int> offset{0};
  for (int d : out_deg) {
    out_basis.push_back(monomials(nvars, d));
    offset.push_back(offset.back() + static_cast<int>(out_basis.back().size()));
  }
  std::vector<std::vector<mpq_class>> rows;
  for (int i = 0; i < ni; ++i)
    for (const auto& u : monomials(nvars, in_deg[i])) {
      std::vector<mpq_class> r(offset.back(), 0);
      for (int j = 0; j < no; ++j) {
        const auto& e = rows_in ? m[i][j] : m[j][i];
        if (e.is_zero()) continue;
        auto block = coefficient_rows({e.times(u)}, out_basis[j])[0];
        for (std::size_t k = 0; k < block.size(); ++k) r[offset[j] + k] += block[k];
      }
      rows.push_back(std::move(r));
    }
  return rows.empty() ? 0 : rank(rows);
}

// (h^0, .., h^n) of F(t) straight from the long exact sequence of
// 0 -> (+) O(a_i) -> (+) O(b_j) -> F -> 0 and Serre duality; n >= 2.
inline std::vector<long long> cohomology_row(const tailsheaf::SheafPresentation<Rational>& p, int t) {
  int n = p.n(), nv = n + 1;
  const auto& a = p.source_twists();
  const auto& b = p.target_twists();
  auto dim = [&](int d) { return d < 0 ? 0LL : binomial(d + n, n); };
  std::vector<long long> h(n + 1, 0);
  std::vector<int> src, dst;
  for (int x : a) src.push_back(t + x);
  for (int x : b) dst.push_back(t + x);
  long long r0 = block_map_rank(p.matrix(), nv, src, dst, true);
  for (int d : dst) h[0] += dim(d);
  h[0] -= r0;
  int e = -t - n - 1;
  std::vector<int> dsrc, ddst;
  for (int x : b) dsrc.push_back(e - x);
  for (int x : a) ddst.push_back(e - x);
  long long rn = block_map_rank(p.matrix(), nv, dsrc, ddst, false);
  for (int d : ddst) h[n - 1] += dim(d);
  h[n - 1] -= rn;
  for (int d : dsrc) h[n] += dim(d);
  h[n] -= rn;
  return h;
}

}  // namespace oracle
