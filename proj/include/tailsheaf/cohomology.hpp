#pragma once

// Cohomology tables h^i(F(t)) of a presented sheaf, two ways.
//
// Dense: ranks of the induced maps on twisted sections and, through Serre
// duality, on top cohomology. Groebner: Hilbert functions of the graded
// cokernels of M and of M^t. The two share nothing beyond the matrix.

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hilbert.hpp"
#include "presentation.hpp"

namespace tailsheaf {

enum class Engine { Dense, Groebner, Both };

inline std::string to_string(Engine e) {
  switch (e) {
    case Engine::Dense: return "dense";
    case Engine::Groebner: return "groebner";
    case Engine::Both: return "both";
  }
  return "?";
}

inline Engine parse_engine(const std::string& s) {
  if (s == "dense") return Engine::Dense;
  if (s == "groebner") return Engine::Groebner;
  if (s == "both") return Engine::Both;
  throw ValidationError("unknown engine '" + s + "' (dense, groebner, both)");
}

struct CohomologyTable {
  int n = 0;
  int tmin = 0, tmax = 0;
  std::string engine;
  std::vector<std::vector<long long>> h;  // h[t - tmin][i]

  long long at(int i, int t) const { return h.at(t - tmin).at(i); }

  friend bool operator==(const CohomologyTable& a, const CohomologyTable& b) {
    return a.n == b.n && a.tmin == b.tmin && a.tmax == b.tmax && a.h == b.h;
  }
};

inline long long dim_forms(int nvars, int d) { return d < 0 ? 0 : detail::binomial(d + nvars - 1, nvars - 1); }

// chi(O(d)) = C(n + d, n) as a polynomial in d, valid for every integer d.
inline long long hilbert_poly(int n, long long d) {
  long long num = 1, den = 1;
  for (int k = 1; k <= n; ++k) {
    num *= d + k;
    den *= k;
  }
  return num / den;
}

template <Field F>
long long euler_characteristic(const SheafPresentation<F>& p, int t) {
  long long chi = 0;
  for (int b : p.target_twists()) chi += hilbert_poly(p.n(), b + t);
  for (int a : p.source_twists()) chi -= hilbert_poly(p.n(), a + t);
  return chi;
}

// Default window: covers the region where h^{n-1} can be nonzero for tails
// with generator degrees up to max b, plus a margin on both sides.
template <Field F>
std::pair<int, int> default_window(const SheafPresentation<F>& p) {
  int maxb = 0;
  for (int b : p.target_twists()) maxb = std::max(maxb, b);
  for (int a : p.source_twists()) maxb = std::max(maxb, a);
  return {-(p.n() + 1) - maxb - 4, maxb + 2};
}

namespace detail {

template <Field F>
void require_cohomology_ready(const SheafPresentation<F>& p, int tmin, int tmax) {
  if (p.n() < 2) throw PreconditionError("cohomology tables need n >= 2");
  if (tmin > tmax) throw PreconditionError("empty twist window");
}

// Rank of the degree-d piece of  (+)_i S(u_i) -> (+)_j S(v_j),  g |-> g * A,
// where A[i][j] = entry(i, j). Returns {rank, dim target}.
template <Field F, class Entry>
std::pair<long long, long long> graded_map_rank(int nvars, const std::vector<int>& src, const std::vector<int>& dst, int d, Entry entry) {
  std::vector<std::vector<Monomial>> dst_basis(dst.size());
  std::vector<std::unordered_map<Monomial, int, MonomialHash>> dst_index(dst.size());
  std::vector<int> offset(dst.size() + 1, 0);
  for (std::size_t j = 0; j < dst.size(); ++j) {
    if (d + dst[j] >= 0) dst_basis[j] = monomial_basis(nvars, d + dst[j]);
    dst_index[j] = index_of(dst_basis[j]);
    offset[j + 1] = offset[j] + static_cast<int>(dst_basis[j].size());
  }
  using Echelon = std::conditional_t<std::is_same_v<F, Rational>, IntegerEchelon, SparseEchelon<F>>;
  Echelon ech(offset.back());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (d + src[i] < 0) continue;
    for (const auto& m : monomial_basis(nvars, d + src[i])) {
      std::vector<std::pair<int, F>> row;
      for (std::size_t j = 0; j < dst.size(); ++j) {
        const Poly<F>& e = entry(static_cast<int>(i), static_cast<int>(j));
        for (const auto& [mono, c] : e.terms()) row.emplace_back(offset[j] + dst_index[j].at(m * mono), c);
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      ech.add(std::move(row));
    }
  }
  return {ech.rank(), offset.back()};
}

template <Field F>
std::vector<long long> dense_row(const SheafPresentation<F>& p, int t) {
  int n = p.n(), nv = p.nvars();
  std::vector<long long> h(n + 1, 0);
  // sections: coker of (+) S_{a_i + t} -> (+) S_{b_j + t}
  auto [r0, dim0] = graded_map_rank<F>(nv, p.source_twists(), p.target_twists(), t, [&](int i, int j) -> const Poly<F>& { return p(i, j); });
  h[0] = dim0 - r0;
  // top: H^n(O(c)) = S_{-c-n-1}^*, the dual map is M^t on (+) S_{e-b_j} -> (+) S_{e-a_i}
  int e = -t - n - 1;
  std::vector<int> nb, na;
  for (int b : p.target_twists()) nb.push_back(-b);
  for (int a : p.source_twists()) na.push_back(-a);
  long long dim_top_b = 0;
  for (int b : p.target_twists()) dim_top_b += dim_forms(nv, e - b);
  auto [rt, dim_a] = graded_map_rank<F>(nv, nb, na, e, [&](int j, int i) -> const Poly<F>& { return p(i, j); });
  h[n - 1] = dim_a - rt;
  h[n] = dim_top_b - rt;
  return h;
}

}  // namespace detail

template <Field F>
CohomologyTable dense_table(const SheafPresentation<F>& p, int tmin, int tmax, int threads = 1) {
  detail::require_cohomology_ready(p, tmin, tmax);
  CohomologyTable tab{p.n(), tmin, tmax, "dense", std::vector<std::vector<long long>>(tmax - tmin + 1)};
  int count = tmax - tmin + 1;
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int t = tmin; t <= tmax; ++t) tab.h[t - tmin] = detail::dense_row(p, t);
    return tab;
  }
  // each worker owns whole rows, so the result does not depend on scheduling
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::uint32_t modulus = 0;
  if constexpr (std::is_same_v<F, Zp>) modulus = Zp::modulus();
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        std::optional<PrimeFieldScope> scope;
        if constexpr (std::is_same_v<F, Zp>) scope.emplace(modulus);
        for (int k = next++; k < count; k = next++) tab.h[k] = detail::dense_row(p, tmin + k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return tab;
}

// Graded modules attached to P. E = coker((+) S(-b_j) -> (+) S(-a_i)) via the
// columns of M, so that h^{n-1}(F(t)) = HF_E(-t-n-1); N = coker of the rows,
// with H^0_*(F) = N.
template <Field F>
struct GradedCokernel {
  ModuleGB<F> gb;
  HilbertSeries hs;
};

template <Field F>
GradedCokernel<F> ext_module(const SheafPresentation<F>& p) {
  std::vector<std::vector<Poly<F>>> cols;
  for (int j = 0; j < p.cols(); ++j) {
    std::vector<Poly<F>> v;
    for (int i = 0; i < p.rows(); ++i) v.push_back(p(i, j));
    bool zero = std::all_of(v.begin(), v.end(), [](const Poly<F>& f) { return f.is_zero(); });
    if (!zero) cols.push_back(std::move(v));
  }
  ModuleGB<F> gb(p.nvars(), p.source_twists(), cols);
  auto hs = hilbert_series(gb);
  return {std::move(gb), std::move(hs)};
}

template <Field F>
GradedCokernel<F> section_module(const SheafPresentation<F>& p) {
  std::vector<int> degs;
  for (int b : p.target_twists()) degs.push_back(-b);
  std::vector<std::vector<Poly<F>>> rows;
  for (int i = 0; i < p.rows(); ++i) rows.push_back(p.matrix()[i]);
  ModuleGB<F> gb(p.nvars(), degs, rows);
  auto hs = hilbert_series(gb);
  return {std::move(gb), std::move(hs)};
}

template <Field F>
CohomologyTable groebner_table(const SheafPresentation<F>& p, int tmin, int tmax) {
  detail::require_cohomology_ready(p, tmin, tmax);
  int n = p.n(), nv = p.nvars();
  auto ext = ext_module(p);
  auto sec = section_module(p);
  CohomologyTable tab{n, tmin, tmax, "groebner", {}};
  for (int t = tmin; t <= tmax; ++t) {
    std::vector<long long> h(n + 1, 0);
    int e = -t - n - 1;
    h[0] = sec.hs(t);
    h[n - 1] = ext.hs(e);
    long long top = ext.hs(e);
    for (int b : p.target_twists()) top += dim_forms(nv, e - b);
    for (int a : p.source_twists()) top -= dim_forms(nv, e - a);
    h[n] = top;
    tab.h.push_back(std::move(h));
  }
  return tab;
}

struct EngineMismatch : InconsistencyError {
  using InconsistencyError::InconsistencyError;
};

template <Field F>
CohomologyTable cohomology_table(const SheafPresentation<F>& p, int tmin, int tmax, Engine engine = Engine::Dense, int threads = 1) {
  switch (engine) {
    case Engine::Dense: return dense_table(p, tmin, tmax, threads);
    case Engine::Groebner: return groebner_table(p, tmin, tmax);
    case Engine::Both: {
      auto d = dense_table(p, tmin, tmax, threads);
      auto g = groebner_table(p, tmin, tmax);
      for (int t = tmin; t <= tmax; ++t)
        for (int i = 0; i <= p.n(); ++i)
          if (d.at(i, t) != g.at(i, t))
            throw EngineMismatch("engines disagree on h^" + std::to_string(i) + "(F(" + std::to_string(t) + ")): dense " +
                                 std::to_string(d.at(i, t)) + ", groebner " + std::to_string(g.at(i, t)));
      d.engine = "both";
      return d;
    }
  }
  throw PreconditionError("unknown engine");
}

struct EulerCheck {
  int t = 0;
  long long alternating_sum = 0;
  long long chi = 0;
  bool pass() const { return alternating_sum == chi; }
};

template <Field F>
std::vector<EulerCheck> euler_check(const SheafPresentation<F>& p, const CohomologyTable& tab) {
  std::vector<EulerCheck> out;
  for (int t = tab.tmin; t <= tab.tmax; ++t) {
    EulerCheck c{t, 0, euler_characteristic(p, t)};
    for (int i = 0; i <= tab.n; ++i) c.alternating_sum += (i % 2 ? -1 : 1) * tab.at(i, t);
    out.push_back(c);
  }
  return out;
}

inline std::string to_text(const CohomologyTable& tab) {
  std::ostringstream os;
  os << "engine: " << tab.engine << "\n";
  os << std::setw(5) << "t";
  for (int i = 0; i <= tab.n; ++i) os << std::setw(8) << ("h" + std::to_string(i));
  os << "\n";
  for (int t = tab.tmin; t <= tab.tmax; ++t) {
    os << std::setw(5) << t;
    for (int i = 0; i <= tab.n; ++i) os << std::setw(8) << tab.at(i, t);
    os << "\n";
  }
  return os.str();
}

inline std::string to_csv(const CohomologyTable& tab) {
  std::ostringstream os;
  os << "t";
  for (int i = 0; i <= tab.n; ++i) os << ",h" << i;
  os << ",engine\n";
  for (int t = tab.tmin; t <= tab.tmax; ++t) {
    os << t;
    for (int i = 0; i <= tab.n; ++i) os << "," << tab.at(i, t);
    os << "," << tab.engine << "\n";
  }
  return os.str();
}

}  // namespace tailsheaf
