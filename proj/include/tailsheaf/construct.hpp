#pragma once

// Constructors for tail sheaves: S_1, multi-point blocks, curvilinear fat
// points, general fat points from commuting nilpotent matrices, chains of
// extensions, and the named fixture catalog.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fitting.hpp"
#include "presentation.hpp"
#include "zero_dim.hpp"

namespace tailsheaf {

template <Field F>
SheafPresentation<F> s1(int n) {
  if (n < 2) throw PreconditionError("S_1 needs n >= 2");
  std::vector<Poly<F>> row;
  for (int i = 0; i < n; ++i) row.push_back(Poly<F>::variable(n + 1, i));
  return SheafPresentation<F>(n, {0}, std::vector<int>(n, 1), {row});
}

// 0 -> O -> O(1)^{n+1} -> T_{P^n} -> 0
template <Field F>
SheafPresentation<F> euler_tangent(int n) {
  if (n < 1) throw PreconditionError("tangent bundle needs n >= 1");
  std::vector<Poly<F>> row;
  for (int i = 0; i <= n; ++i) row.push_back(Poly<F>::variable(n + 1, i));
  return SheafPresentation<F>(n, {0}, std::vector<int>(n + 1, 1), {row});
}

template <Field F>
struct PointForms {
  std::vector<F> point;          // n+1 coordinates
  std::vector<Poly<F>> forms;    // n independent linear forms vanishing at point
};

// n independent linear forms through p: a basis of {c : c . p = 0}.
template <Field F>
std::vector<Poly<F>> forms_through(const std::vector<F>& p) {
  DenseMatrix<F> row(1, static_cast<int>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) row(0, static_cast<int>(k)) = p[k];
  if (row.is_zero()) throw PreconditionError("the zero vector is not a projective point");
  std::vector<Poly<F>> out;
  for (const auto& c : row.kernel()) out.push_back(linear_form<F>(c));
  return out;
}

template <Field F>
void check_point_forms(const PointForms<F>& pf, int n) {
  if (static_cast<int>(pf.point.size()) != n + 1) throw PreconditionError("point has the wrong number of coordinates");
  if (static_cast<int>(pf.forms.size()) != n) throw PreconditionError("need exactly n linear forms per point");
  DenseMatrix<F> c(n, n + 1);
  for (int i = 0; i < n; ++i) {
    const auto& f = pf.forms[i];
    if (!f.is_zero() && (f.nvars() != n + 1 || f.degree() != 1 || !f.is_homogeneous()))
      throw PreconditionError("forms must be linear");
    if (!f.evaluate(pf.point).is_zero()) throw PreconditionError("form " + f.to_string() + " does not vanish at the point");
    auto lc = linear_coefficients(f);
    for (int j = 0; j <= n; ++j) c(i, j) = lc[j];
  }
  if (c.rank() != n) throw PreconditionError("the linear forms are dependent");
}

// Block-diagonal m x nm presentation, one S_1 block per point.
template <Field F>
SheafPresentation<F> points_block(int n, const std::vector<PointForms<F>>& pts) {
  int m = static_cast<int>(pts.size());
  typename SheafPresentation<F>::Matrix mat(m, std::vector<Poly<F>>(n * m, Poly<F>(n + 1)));
  for (int i = 0; i < m; ++i) {
    check_point_forms(pts[i], n);
    for (int k = 0; k < n; ++k) mat[i][i * n + k] = pts[i].forms[k];
  }
  return SheafPresentation<F>(n, std::vector<int>(m, 0), std::vector<int>(n * m, 1), std::move(mat));
}

template <Field F>
SheafPresentation<F> points_block(int n, const std::vector<std::vector<F>>& points) {
  std::vector<PointForms<F>> pts;
  for (const auto& p : points) pts.push_back({p, forms_through(p)});
  return points_block(n, pts);
}

// Row i carries X = [x_0..x_{n-1}] in column block i and T = [x_n, 0, .., 0] in block i-1.
template <Field F>
SheafPresentation<F> curvilinear(int n, int m) {
  if (n < 2 || m < 1) throw PreconditionError("curvilinear needs n >= 2 and m >= 1");
  typename SheafPresentation<F>::Matrix mat(m, std::vector<Poly<F>>(n * m, Poly<F>(n + 1)));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) mat[i][i * n + k] = Poly<F>::variable(n + 1, k);
    if (i > 0) mat[i][(i - 1) * n] = Poly<F>::variable(n + 1, n);
  }
  return SheafPresentation<F>(n, std::vector<int>(m, 0), std::vector<int>(n * m, 1), std::move(mat));
}

template <Field F>
struct FatPointSpec {
  std::vector<F> point;                  // empty means (0:...:0:1)
  std::vector<DenseMatrix<F>> matrices;  // C_0..C_{n-1}, m x m, commuting and nilpotent
};

// Smallest subspace containing e_0 and stable under all C_i is everything.
template <Field F>
bool is_cyclic(const std::vector<DenseMatrix<F>>& c) {
  if (c.empty()) return false;
  int m = c[0].rows();
  if (m == 0) return false;
  std::vector<std::vector<F>> span;
  DenseMatrix<F> basis(0, m);
  std::vector<F> e(m);
  e[0] = F(1);
  std::vector<std::vector<F>> frontier{e};
  auto rank_of = [&](const std::vector<std::vector<F>>& vs) {
    DenseMatrix<F> a(static_cast<int>(vs.size()), m);
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (int j = 0; j < m; ++j) a(static_cast<int>(i), j) = vs[i][j];
    return a.rank();
  };
  while (!frontier.empty()) {
    std::vector<std::vector<F>> next;
    for (auto& v : frontier) {
      span.push_back(v);
      if (rank_of(span) < static_cast<int>(span.size())) {
        span.pop_back();
        continue;
      }
      for (const auto& ci : c) next.push_back(ci.apply(v));
    }
    frontier = std::move(next);
  }
  return static_cast<int>(span.size()) == m;
}

// Invertible A with A p = e_n, so that g(A x) moves structure at e_n to p.
template <Field F>
DenseMatrix<F> coordinates_sending_to_last(const std::vector<F>& p) {
  int nv = static_cast<int>(p.size());
  DenseMatrix<F> b(nv, nv);
  for (int i = 0; i < nv; ++i) b(i, nv - 1) = p[i];
  // complete with standard vectors avoiding the pivot of p
  int pivot = nv - 1;
  while (pivot >= 0 && p[pivot].is_zero()) --pivot;
  if (pivot < 0) throw PreconditionError("the zero vector is not a projective point");
  int col = 0;
  for (int i = 0; i < nv; ++i) {
    if (i == pivot) continue;
    b(i, col++) = F(1);
  }
  return b.inverse();
}

// Rows indexed by the algebra basis e_r; column i*m + b holds x_i e_b - x_n C_i e_b.
template <Field F>
SheafPresentation<F> from_local_algebra(const FatPointSpec<F>& spec) {
  const auto& c = spec.matrices;
  int n = static_cast<int>(c.size());
  if (n < 2) throw PreconditionError("fat point construction needs n >= 2");
  int m = c[0].rows();
  for (const auto& ci : c)
    if (ci.rows() != m || ci.cols() != m) throw PreconditionError("multiplication matrices must all be m x m");
  check_commuting_nilpotent(c);
  typename SheafPresentation<F>::Matrix mat(m, std::vector<Poly<F>>(n * m, Poly<F>(n + 1)));
  Poly<F> xn = Poly<F>::variable(n + 1, n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b)
      for (int r = 0; r < m; ++r) {
        Poly<F> e(n + 1);
        if (r == b) e += Poly<F>::variable(n + 1, i);
        if (!c[i](r, b).is_zero()) e -= c[i](r, b) * xn;
        mat[r][i * m + b] = e;
      }
  SheafPresentation<F> p(n, std::vector<int>(m, 0), std::vector<int>(n * m, 1), std::move(mat));
  if (!spec.point.empty()) {
    auto a = coordinates_sending_to_last(spec.point);
    p = SheafPresentation<F>(n, p.source_twists(), p.target_twists(), change_coordinates<F>(p.matrix(), a));
  }
  return p;
}

template <Field F>
SheafPresentation<F> from_local_algebra(const LocalAlgebra<F>& a, std::vector<F> point = {}) {
  return from_local_algebra(FatPointSpec<F>{std::move(point), a.matrices});
}

// Lower block-triangular chain: diagonal rows L_i, block (i, j) for j < i.
template <Field F>
struct ChainSpec {
  int n = 3;
  std::vector<std::vector<Poly<F>>> diagonal;                       // m rows of n linear forms
  std::map<std::pair<int, int>, std::vector<Poly<F>>> lower;        // (i, j), j < i -> 1 x n block
};

template <Field F>
SheafPresentation<F> chain_extension(const ChainSpec<F>& spec) {
  int n = spec.n, m = static_cast<int>(spec.diagonal.size());
  typename SheafPresentation<F>::Matrix mat(m, std::vector<Poly<F>>(n * m, Poly<F>(n + 1)));
  for (int i = 0; i < m; ++i) {
    const auto& l = spec.diagonal[i];
    if (static_cast<int>(l.size()) != n) throw PreconditionError("each diagonal block needs n forms");
    DenseMatrix<F> coeffs(n, n + 1);
    for (int k = 0; k < n; ++k) {
      auto lc = linear_coefficients(l[k]);
      for (int j = 0; j <= n; ++j) coeffs(k, j) = lc[j];
      mat[i][i * n + k] = l[k];
    }
    if (coeffs.rank() != n) throw PreconditionError("diagonal block " + std::to_string(i) + " does not span n independent forms");
  }
  for (const auto& [ij, block] : spec.lower) {
    auto [i, j] = ij;
    if (j >= i || i >= m || j < 0) throw PreconditionError("chain blocks must sit strictly below the diagonal");
    if (static_cast<int>(block.size()) != n) throw PreconditionError("off-diagonal blocks are 1 x n");
    for (int k = 0; k < n; ++k) mat[i][j * n + k] = block[k];
  }
  return SheafPresentation<F>(n, std::vector<int>(m, 0), std::vector<int>(n * m, 1), std::move(mat));
}

// ---- fixture catalog -----------------------------------------------------------

namespace detail {

template <Field F>
SheafPresentation<F> from_rows(int n, std::vector<int> a, std::vector<int> b, const std::vector<std::vector<std::string>>& rows) {
  typename SheafPresentation<F>::Matrix m;
  for (const auto& r : rows) {
    std::vector<Poly<F>> row;
    for (const auto& e : r) row.push_back(parse_poly<F>(e, n + 1));
    m.push_back(std::move(row));
  }
  return SheafPresentation<F>(n, std::move(a), std::move(b), std::move(m));
}

inline std::vector<int> repeat(int v, int k) { return std::vector<int>(k, v); }

inline std::vector<int> concat(std::initializer_list<std::vector<int>> parts) {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace detail

// x, y, z, t of the displayed matrices are x0, x1, x2, x3.
template <Field F>
SheafPresentation<F> fixture(const std::string& name) {
  using detail::concat;
  using detail::repeat;
  if (name == "example_b_points") {
    // two points: (1:1:1:1) with x0-x1, x1-x2, x2-x3 and (0:0:0:1) with x0, x1, x2
    return detail::from_rows<F>(3, repeat(0, 2), repeat(1, 6),
                                {{"x0 - x1", "x1 - x2", "x2 - x3", "0", "0", "0"}, {"0", "0", "0", "x0", "x1", "x2"}});
  }
  if (name == "example_c") {
    return detail::from_rows<F>(3, {0, 0, 2, 2}, concat({repeat(1, 6), repeat(3, 6)}),
                                {{"x0", "x1", "x2", "x3", "0", "0", "0", "0", "0", "0", "0", "0"},
                                 {"0", "0", "x0", "x1", "x2", "x3", "0", "0", "0", "0", "0", "0"},
                                 {"0", "0", "0", "0", "0", "0", "x0 - x1", "x2", "x3", "0", "0", "0"},
                                 {"0", "0", "0", "0", "0", "0", "0", "0", "0", "x0 + x1", "x2", "x3"}});
  }
  if (name == "example_d") {
    std::vector<std::vector<std::string>> rows(8, std::vector<std::string>(26, "0"));
    const std::vector<std::vector<std::string>> m1{{"x0", "x1", "x2", "x3", "0", "0", "0", "0", "0"},
                                                   {"0", "0", "x3", "0", "x0", "x1", "x2", "0", "0"},
                                                   {"0", "0", "0", "0", "x3", "0", "x0", "x1", "x2"}};
    const std::vector<std::vector<std::string>> m2{{"x0", "x1", "x2", "x3", "0", "0", "0", "0"},
                                                   {"0", "0", "0", "0", "x0", "x1", "x2", "x3"}};
    const std::vector<std::vector<std::string>> m3{{"x0", "x1", "x2", "0", "0", "0", "0", "0", "0"},
                                                   {"0", "0", "0", "x0", "x1", "x2", "0", "0", "0"},
                                                   {"0", "0", "0", "0", "0", "0", "x0", "x1", "x2"}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 9; ++j) rows[i][j] = m1[i][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 8; ++j) rows[3 + i][9 + j] = m2[i][j];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 9; ++j) rows[5 + i][17 + j] = m3[i][j];
    return detail::from_rows<F>(3, concat({repeat(0, 3), repeat(2, 2), repeat(3, 3)}),
                                concat({repeat(1, 9), repeat(3, 8), repeat(4, 9)}), rows);
  }
  if (name == "remark_iv") {
    return detail::from_rows<F>(3, repeat(0, 2), repeat(1, 6), {{"x0", "x1", "x2", "0", "0", "0"}, {"x3", "0", "0", "x0", "x1", "x2"}});
  }
  if (name == "counterexample_3x9") {
    return detail::from_rows<F>(3, repeat(0, 3), repeat(1, 9),
                                {{"x0", "x1", "x2", "0", "0", "0", "0", "0", "0"},
                                 {"x3", "0", "0", "x0", "x1", "x2", "0", "0", "0"},
                                 {"0", "0", "0", "0", "x3", "0", "x0", "x1", "x2"}});
  }
  if (name == "poonen_6x18") {
    std::vector<std::vector<std::string>> rows{
        {"x0", "x1", "x2", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
        {"x3", "0", "0", "x0", "x1", "x2", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
        {"0", "x3", "0", "0", "0", "0", "x0", "x1", "x2", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
        {"0", "0", "x3", "0", "0", "0", "0", "0", "0", "x0", "x1", "x2", "0", "0", "0", "0", "0", "0"},
        {"0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "x3", "x0", "x1", "x2", "0", "0", "0"},
        {"0", "0", "0", "x3", "0", "0", "0", "x3", "0", "0", "0", "0", "0", "0", "x3", "x0", "x1", "x2"}};
    return detail::from_rows<F>(3, repeat(0, 6), repeat(1, 18), rows);
  }
  if (name == "chern_16") {
    // (f, g, l)^t : O(-5) -> O(-4) + O(-1)^2 with l = x2 and f, g products of
    // four linear forms, so V(f, g, l) = {(i:j:0:1) : 1 <= i, j <= 4}.
    auto prod = [](int v) {
      Poly<F> f(4, F(1));
      for (int k = 1; k <= 4; ++k) f = f * (Poly<F>::variable(4, v) - F(k) * Poly<F>::variable(4, 3));
      return f;
    };
    return SheafPresentation<F>(3, {-5}, {-4, -1, -1}, {{Poly<F>::variable(4, 2), prod(0), prod(1)}});
  }
  if (name.rfind("euler_tangent", 0) == 0) {
    int n = 3;
    auto open = name.find('(');
    if (open != std::string::npos) n = std::stoi(name.substr(open + 1));
    else if (name.size() > 13 && name[13] == '_') n = std::stoi(name.substr(14));
    return euler_tangent<F>(n);
  }
  throw PreconditionError("unknown fixture '" + name + "'");
}

inline std::vector<std::string> fixture_names() {
  return {"example_b_points", "example_c", "example_d", "remark_iv", "counterexample_3x9", "poonen_6x18", "chern_16", "euler_tangent(3)"};
}

}  // namespace tailsheaf
