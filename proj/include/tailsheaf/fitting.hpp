#pragma once

// Maximal minors and the Fitting ideal F_0 of a presentation matrix, the
// generic-injectivity check built on them, and restriction to hyperplanes.

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "presentation.hpp"
#include "zero_dim.hpp"

namespace tailsheaf {

namespace detail {

// Connected components of the bipartite row/column graph of nonzero entries.
template <Field F>
std::vector<std::pair<std::vector<int>, std::vector<int>>> matrix_components(const SheafPresentation<F>& p) {
  int s = p.rows(), q = p.cols();
  std::vector<int> parent(s + q);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<bool> used_col(q, false);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < q; ++j)
      if (!p(i, j).is_zero()) {
        parent[find(i)] = find(s + j);
        used_col[j] = true;
      }
  std::map<int, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (int i = 0; i < s; ++i) groups[find(i)].first.push_back(i);
  for (int j = 0; j < q; ++j)
    if (used_col[j]) groups[find(s + j)].second.push_back(j);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (auto& [root, g] : groups)
    if (!g.first.empty()) out.push_back(std::move(g));
  return out;
}

// All nonzero r x r minors of the r x c block (rows, cols), by Laplace
// expansion along successive rows memoized on column subsets.
template <Field F>
std::vector<Poly<F>> block_maximal_minors(const SheafPresentation<F>& p, const std::vector<int>& rows, const std::vector<int>& cols) {
  int r = static_cast<int>(rows.size()), c = static_cast<int>(cols.size());
  if (r > c) return {};
  if (c > 64) throw PreconditionError("minor expansion supports at most 64 columns per block");
  std::unordered_map<std::uint64_t, Poly<F>> level{{0, Poly<F>(p.nvars(), F(1))}};
  for (int k = 0; k < r; ++k) {
    std::unordered_map<std::uint64_t, Poly<F>> next;
    for (const auto& [mask, minor] : level) {
      for (int j = 0; j < c; ++j) {
        if (mask >> j & 1) continue;
        const auto& e = p(rows[k], cols[j]);
        if (e.is_zero()) continue;
        int below = std::popcount(mask & ((std::uint64_t{1} << j) - 1));
        Poly<F> term = e * minor;
        if ((k + below) % 2) term = -term;
        auto it = next.find(mask | std::uint64_t{1} << j);
        if (it == next.end()) next.emplace(mask | std::uint64_t{1} << j, std::move(term));
        else it->second += term;
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    level = std::move(next);
  }
  std::vector<std::pair<std::uint64_t, Poly<F>>> sorted(level.begin(), level.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Poly<F>> out;
  for (auto& [mask, poly] : sorted) out.push_back(std::move(poly));
  return out;
}

// Basis of the linear span of homogeneous polynomials, degree by degree.
template <Field F>
std::vector<Poly<F>> linear_span_basis(const std::vector<Poly<F>>& polys) {
  std::map<int, std::vector<const Poly<F>*>> by_degree;
  int nvars = 0;
  for (const auto& f : polys) {
    if (f.is_zero()) continue;
    nvars = f.nvars();
    by_degree[f.degree()].push_back(&f);
  }
  std::vector<Poly<F>> out;
  for (auto& [d, group] : by_degree) {
    auto basis = monomial_basis(nvars, d);
    auto idx = index_of(basis);
    DenseMatrix<F> m(static_cast<int>(group.size()), static_cast<int>(basis.size()));
    for (int i = 0; i < static_cast<int>(group.size()); ++i)
      for (const auto& [mono, c] : group[i]->terms()) m(i, idx.at(mono)) = c;
    auto pivots = m.rref_in_place();
    for (int i = 0; i < static_cast<int>(pivots.size()); ++i) {
      std::vector<typename Poly<F>::Term> terms;
      for (int j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) terms.emplace_back(basis[j], m(i, j));
      out.emplace_back(nvars, std::move(terms));
    }
  }
  return out;
}

}  // namespace detail

// F_0: the ideal of s x s minors (the unit ideal when s = 0). Block-diagonal
// pieces are handled separately and multiplied, which keeps the expansion small.
template <Field F>
IdealGB<F> fitting_ideal(const SheafPresentation<F>& p) {
  const int nv = p.nvars();
  if (p.rows() == 0) return IdealGB<F>(nv, {Poly<F>(nv, F(1))});
  std::vector<Poly<F>> current{Poly<F>(nv, F(1))};
  for (const auto& [rows, cols] : detail::matrix_components(p)) {
    auto minors = detail::block_maximal_minors(p, rows, cols);
    if (minors.empty()) return IdealGB<F>(nv, {});
    IdealGB<F> block(nv, detail::linear_span_basis(minors));
    std::vector<Poly<F>> product;
    for (const auto& a : current)
      for (const auto& b : block.basis()) product.push_back(a * b);
    current = detail::linear_span_basis(product);
  }
  return IdealGB<F>(nv, current);
}

// Projective zero locus is empty iff every affine chart gives the unit ideal.
template <Field F>
bool zero_locus_is_empty(const IdealGB<F>& ideal) {
  for (int j = 0; j < ideal.nvars(); ++j)
    if (!IdealGB<F>(ideal.nvars() - 1, detail::chart_ideal(ideal.basis(), j)).is_unit()) return false;
  return true;
}

struct InjectivityReport {
  bool injective = false;
  bool used_exact_fallback = false;
  int sampled_rank = 0;  // smallest rank seen at the random points
  std::string witness;
};

// Rank s at three random integer points; if any sample drops rank, decide
// exactly by whether some maximal minor is a nonzero polynomial.
template <Field F>
InjectivityReport check_injective(const SheafPresentation<F>& p, std::uint64_t seed = 0) {
  InjectivityReport r;
  r.sampled_rank = p.rows();
  Rng rng(seed ^ 0x5eedULL);
  bool all_full = true;
  std::vector<F> worst;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<F> pt;
    for (int k = 0; k < p.nvars(); ++k) pt.push_back(F(rng.uniform(-50, 50)));
    int rk = p.evaluate(pt).rank();
    if (rk < p.rows()) {
      all_full = false;
      if (rk < r.sampled_rank) worst = pt;
      r.sampled_rank = std::min(r.sampled_rank, rk);
    }
  }
  if (all_full) {
    r.injective = true;
    return r;
  }
  r.used_exact_fallback = true;
  r.injective = !fitting_ideal(p).is_zero_ideal();
  if (!r.injective) {
    std::string pt = "(";
    for (std::size_t k = 0; k < worst.size(); ++k) pt += (k ? ":" : "") + worst[k].to_string();
    r.witness = "all maximal minors vanish identically; rank " + std::to_string(r.sampled_rank) + " < " +
                std::to_string(p.rows()) + " at " + pt + ")";
  }
  return r;
}

// Everything the parser cannot see: injectivity and positive rank.
template <Field F>
void validate_presentation(const SheafPresentation<F>& p, std::uint64_t seed = 0) {
  if (p.rank() < 1) throw ValidationError("rank q - s = " + std::to_string(p.rank()) + " must be at least 1");
  auto r = check_injective(p, seed);
  if (!r.injective) throw ValidationError("the matrix is not generically injective: " + r.witness);
}

template <Field F>
SheafPresentation<F> sub_presentation(const SheafPresentation<F>& p, const std::vector<int>& rows, const std::vector<int>& cols) {
  auto sub = submatrix(p, rows, cols);
  if (sub.rows() > 0) {
    auto r = check_injective(sub);
    if (!r.injective) throw ValidationError("sub-presentation loses injectivity: " + r.witness);
  }
  return sub;
}

template <Field F>
struct Restriction {
  SheafPresentation<F> presentation;  // over P^{n-1}
  std::vector<F> coefficients;        // x_n = sum_{i<n} c_i x_i
  int attempts = 1;
  std::string certificate;
};

template <Field F>
std::string hyperplane_to_string(const std::vector<F>& c) {
  return "x" + std::to_string(c.size()) + " = " + linear_form<F>(c).to_string();
}

namespace detail {

template <Field F>
SheafPresentation<F> substitute_hyperplane(const SheafPresentation<F>& p, const std::vector<F>& c) {
  int n = p.n();
  std::vector<Poly<F>> images;
  for (int i = 0; i < n; ++i) images.push_back(Poly<F>::variable(n, i));
  images.push_back(linear_form<F>(c));
  typename SheafPresentation<F>::Matrix m;
  for (int i = 0; i < p.rows(); ++i) {
    std::vector<Poly<F>> row;
    for (int j = 0; j < p.cols(); ++j) row.push_back(p(i, j).substitute(images, n));
    m.push_back(std::move(row));
  }
  return SheafPresentation<F>(n - 1, p.source_twists(), p.target_twists(), std::move(m));
}

template <Field F>
bool hyperplane_avoids(const IdealGB<F>& f0, const std::vector<F>& c, int n) {
  std::vector<Poly<F>> gens = f0.basis();
  std::vector<F> h(c.begin(), c.end());
  h.push_back(F(-1));
  gens.push_back(linear_form<F>(h));
  return zero_locus_is_empty(IdealGB<F>(n + 1, gens));
}

}  // namespace detail

template <Field F>
Restriction<F> restrict_hyperplane(const SheafPresentation<F>& p, const std::vector<F>& c) {
  if (p.n() < 2) throw PreconditionError("restriction needs n >= 2");
  if (static_cast<int>(c.size()) != p.n()) throw PreconditionError("hyperplane needs n coefficients");
  auto f0 = fitting_ideal(p);
  if (!detail::hyperplane_avoids(f0, c, p.n()))
    throw PreconditionError("hyperplane " + hyperplane_to_string(c) + " meets the singular locus");
  Restriction<F> r{detail::substitute_hyperplane(p, c), c, 1, ""};
  r.certificate = "V(F0) and the hyperplane " + hyperplane_to_string(c) + " have empty intersection (unit ideal in every chart)";
  return r;
}

// Integer coefficients in [-10, 10] from a seeded generator, at most 20 tries.
template <Field F>
Restriction<F> restrict_hyperplane(const SheafPresentation<F>& p, std::uint64_t seed) {
  if (p.n() < 2) throw PreconditionError("restriction needs n >= 2");
  auto f0 = fitting_ideal(p);
  Rng rng(seed);
  for (int attempt = 1; attempt <= 20; ++attempt) {
    std::vector<F> c;
    for (int i = 0; i < p.n(); ++i) c.push_back(F(rng.uniform(-10, 10)));
    if (!detail::hyperplane_avoids(f0, c, p.n())) continue;
    Restriction<F> r{detail::substitute_hyperplane(p, c), c, attempt, ""};
    r.certificate = "V(F0) and the hyperplane " + hyperplane_to_string(c) + " have empty intersection (unit ideal in every chart)";
    return r;
  }
  throw PreconditionError("no hyperplane avoiding the singular locus found in 20 attempts");
}

}  // namespace tailsheaf
