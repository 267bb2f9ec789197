#pragma once

// Structure of minimal tails: peeling off an S_1, chain form, splitting by
// singular point, recognizing sums of tangent bundles after restriction,
// splitting level sheaves, and the G_i / H_i blocks of an extension.
//
// Minimal tails are m x nm matrices of linear forms. All of the linear algebra
// below works in S_1^m, the degree-one part of the free module on the rows:
// coordinate (r, v) is the coefficient of x_v in row r.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "classify.hpp"
#include "construct.hpp"
#include "fitting.hpp"

namespace tailsheaf {

namespace detail {

template <Field F>
DenseMatrix<F> linear_coefficient_matrix(const std::vector<Poly<F>>& forms, int nvars) {
  DenseMatrix<F> c(static_cast<int>(forms.size()), nvars);
  for (int i = 0; i < c.rows(); ++i) {
    if (forms[i].is_zero()) continue;
    auto lc = linear_coefficients(forms[i]);
    for (int v = 0; v < nvars; ++v) c(i, v) = lc[v];
  }
  return c;
}

template <Field F>
void require_linear(const SheafPresentation<F>& p, const char* what) {
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      const auto& e = p(i, j);
      if (!e.is_zero() && (e.degree() != 1 || !e.is_homogeneous()))
        throw PreconditionError(std::string(what) + " needs a matrix of linear forms");
    }
}

// Column j of a linear matrix as a vector in S_1^s.
template <Field F>
DenseMatrix<F> column_vectors(const SheafPresentation<F>& p) {
  int nv = p.nvars();
  DenseMatrix<F> w(p.cols(), p.rows() * nv);
  for (int j = 0; j < p.cols(); ++j)
    for (int r = 0; r < p.rows(); ++r) {
      const auto& e = p(r, j);
      if (e.is_zero()) continue;
      auto lc = linear_coefficients(e);
      for (int v = 0; v < nv; ++v) w(j, r * nv + v) = lc[v];
    }
  return w;
}

template <Field F>
DenseMatrix<F> random_invertible(int k, Rng& rng) {
  for (;;) {
    DenseMatrix<F> a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = F(rng.uniform(-3, 3));
    if (a.rank() == k) return a;
  }
}

template <Field F>
DenseMatrix<F> block_identity(int lead, const DenseMatrix<F>& tail) {
  int k = lead + tail.rows();
  DenseMatrix<F> out = DenseMatrix<F>::identity(k);
  for (int i = 0; i < tail.rows(); ++i)
    for (int j = 0; j < tail.cols(); ++j) out(lead + i, lead + j) = tail(i, j);
  return out;
}

inline std::string point_to_string(const std::vector<Rational>& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? ":" : "") + p[k].to_string();
  return s + ")";
}

// Scale so the last nonzero coordinate is 1.
inline std::vector<Rational> normalize_point(std::vector<Rational> p) {
  for (std::size_t k = p.size(); k-- > 0;)
    if (!p[k].is_zero()) {
      Rational inv = Rational(1) / p[k];
      for (auto& c : p) c *= inv;
      break;
    }
  return p;
}

// The common zero of n independent linear forms in n + 1 variables.
inline std::vector<Rational> point_of_forms(const std::vector<Poly<Rational>>& forms, int nvars) {
  auto k = linear_coefficient_matrix(forms, nvars).kernel();
  if (k.size() != 1) throw InconsistencyError("diagonal block does not cut out a single point");
  return normalize_point(k[0]);
}

template <Field F>
void require_minimal(const SheafPresentation<F>& p, const char* what) {
  auto c = classify_tail(p);
  if (!c.is_tail || !c.minimal) throw PreconditionError(std::string(what) + " needs a minimal tail (" + c.certificate + ")");
  require_linear(p, what);
}

}  // namespace detail

// ---- peel ------------------------------------------------------------------------

struct PeelResult {
  std::vector<Rational> point;            // the chosen singular point, original coordinates
  int row = 0;                            // row of the input that was replaced
  std::vector<Rational> combination;      // the new first row is sum_i combination[i] * row_i
  SheafPresentation<Rational> transformed;  // first row (x_0 .. x_{n-1}, 0 .. 0)
  SheafPresentation<Rational> quotient;     // delete that row and its n columns
  TransformationRecord<Rational> record;    // transformed = apply(record, input)
};

inline std::vector<std::vector<Rational>> rational_singular_points(const SheafPresentation<Rational>& p) {
  auto locus = projective_zero_locus(fitting_ideal(p));
  std::vector<std::vector<Rational>> pts;
  for (const auto& q : locus.points) pts.push_back(q.coords);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Rational& x, const Rational& y) { return x < y; });
  });
  return pts;
}

// Peel at a given point; the caller has checked that the matrix is a minimal tail.
inline PeelResult peel_at(const SheafPresentation<Rational>& p, const std::vector<Rational>& point) {
  const int n = p.n(), nv = p.nvars(), m = p.rows(), q = p.cols();
  auto at = p.evaluate(point);
  auto kernel = at.left_kernel();
  if (kernel.empty()) throw PreconditionError("the matrix has full rank at " + detail::point_to_string(point));
  // echelon kernel basis: the vector with the smallest leading index comes first
  DenseMatrix<Rational> kb(static_cast<int>(kernel.size()), m);
  for (int i = 0; i < kb.rows(); ++i)
    for (int j = 0; j < m; ++j) kb(i, j) = kernel[i][j];
  auto piv = kb.rref_in_place();
  int r = piv[0];
  std::vector<Rational> v = kb.row(0);

  // rows: the combination goes first, the remaining rows keep their order
  DenseMatrix<Rational> rows(m, m);
  for (int j = 0; j < m; ++j) rows(0, j) = v[j];
  for (int i = 0, k = 1; i < m; ++i)
    if (i != r) rows(k++, i) = Rational(1);

  std::vector<Poly<Rational>> row(q, Poly<Rational>(nv));
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < m; ++i)
      if (!v[i].is_zero()) row[j] += v[i] * p(i, j);
  auto coeff = detail::linear_coefficient_matrix(row, nv);  // q x nv
  DenseMatrix<Rational> ct = coeff.transpose();
  auto pivots = ct.rref_in_place();
  if (static_cast<int>(pivots.size()) != n)
    throw PreconditionError("the row vanishing at " + detail::point_to_string(point) + " spans " + std::to_string(pivots.size()) +
                            " independent forms, not " + std::to_string(n) + "; the singular locus is not zero-dimensional");

  // columns: pivots first, every other column reduced to zero in the new row
  DenseMatrix<Rational> cols(q, q);
  std::vector<bool> is_pivot(q, false);
  for (int k = 0; k < n; ++k) {
    cols(pivots[k], k) = Rational(1);
    is_pivot[pivots[k]] = true;
  }
  for (int j = 0, k = n; j < q; ++j) {
    if (is_pivot[j]) continue;
    cols(j, k) = Rational(1);
    for (int t = 0; t < n; ++t) cols(pivots[t], k) = -ct(t, j);
    ++k;
  }

  // coordinates: the pivot forms become x_0 .. x_{n-1}, the point becomes e_n
  DenseMatrix<Rational> a(nv, nv);
  for (int k = 0; k < n; ++k)
    for (int u = 0; u < nv; ++u) a(k, u) = coeff(pivots[k], u);
  int last = nv - 1;
  while (point[last].is_zero()) --last;
  a(n, last) = Rational(1);
  TransformationRecord<Rational> rec{rows, cols, a.inverse()};
  auto transformed = apply(rec, p);
  for (int k = 0; k < q; ++k) {
    Poly<Rational> want = k < n ? Poly<Rational>::variable(nv, k) : Poly<Rational>(nv);
    if (!(transformed(0, k) == want)) throw InconsistencyError("peel did not produce the row (x_0 .. x_{n-1}, 0 .. 0)");
  }
  std::vector<int> qr(m - 1), qc(q - n);
  std::iota(qr.begin(), qr.end(), 1);
  std::iota(qc.begin(), qc.end(), n);
  auto quotient = submatrix(transformed, qr, qc);
  return {point, r, v, transformed, quotient, rec};
}

inline PeelResult peel(const SheafPresentation<Rational>& p) {
  detail::require_minimal(p, "peel");
  auto pts = rational_singular_points(p);
  if (pts.empty()) throw PreconditionError("no rational singular point");
  return peel_at(p, pts.front());
}

// ---- chain form ------------------------------------------------------------------

struct ChainForm {
  SheafPresentation<Rational> presentation;  // lower block triangular
  TransformationRecord<Rational> record;
  std::vector<std::vector<Rational>> points;  // points[i]: zero of the diagonal block of row i
};

// Iterated peel. Each step acts on the trailing rows and column blocks only,
// so zeros above the diagonal survive; its coordinate change acts on everything.
inline ChainForm chain_form(const SheafPresentation<Rational>& p) {
  detail::require_minimal(p, "chain_form");
  const int n = p.n(), m = p.rows(), q = p.cols(), nv = p.nvars();
  auto rec = TransformationRecord<Rational>::identity(m, q, nv);
  auto cur = p;
  for (int k = 0; k < m; ++k) {
    std::vector<int> rs(m - k), cs(q - n * k);
    std::iota(rs.begin(), rs.end(), k);
    std::iota(cs.begin(), cs.end(), n * k);
    auto sub = submatrix(cur, rs, cs);
    auto pts = rational_singular_points(sub);
    if (pts.empty()) throw PreconditionError("no rational singular point at chain step " + std::to_string(k));
    auto step = peel_at(sub, pts.front());
    TransformationRecord<Rational> lift{detail::block_identity(k, step.record.rows), detail::block_identity(n * k, step.record.cols),
                                        step.record.coords};
    cur = apply(lift, cur);
    rec = {lift.rows * rec.rows, rec.cols * lift.cols, rec.coords * lift.coords};
  }
  if (!(apply(rec, p) == cur)) throw InconsistencyError("chain form record does not reproduce the matrix");
  std::vector<std::vector<Rational>> points;
  for (int i = 0; i < m; ++i) {
    std::vector<Poly<Rational>> diag(cur.matrix()[i].begin() + n * i, cur.matrix()[i].begin() + n * (i + 1));
    points.push_back(detail::point_of_forms(diag, nv));
    for (int j = n * (i + 1); j < q; ++j)
      if (!cur(i, j).is_zero()) throw InconsistencyError("chain form is not lower block triangular");
  }
  return {cur, rec, points};
}

// ---- decompose -------------------------------------------------------------------

struct Block {
  SheafPresentation<Rational> presentation;
  std::vector<Rational> point;
  int m = 0;
  std::vector<int> rows, cols;  // positions in the transformed matrix
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  TransformationRecord<Rational> record;
  SheafPresentation<Rational> transformed;
  std::vector<std::string> stages;
};

namespace detail {

// E_0 = K^m and the operators x_v / h on it, read off the degree-one quotient
// S_1^m / (column span). Returns nothing if h is a zero divisor in degree 0.
inline std::optional<std::vector<DenseMatrix<Rational>>> degree_zero_operators(const DenseMatrix<Rational>& w_rref,
                                                                              const std::vector<int>& pivots, int m, int nv,
                                                                              const std::vector<Rational>& h) {
  std::vector<bool> is_pivot(m * nv, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free;
  for (int c = 0; c < m * nv; ++c)
    if (!is_pivot[c]) free.push_back(c);
  auto reduce = [&](std::vector<Rational> u) {
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      Rational f = u[pivots[k]];
      if (f.is_zero()) continue;
      for (int c = 0; c < m * nv; ++c)
        if (!w_rref(static_cast<int>(k), c).is_zero()) u[c] -= f * w_rref(static_cast<int>(k), c);
    }
    std::vector<Rational> out;
    for (int c : free) out.push_back(u[c]);
    return out;
  };
  std::vector<DenseMatrix<Rational>> l(nv, DenseMatrix<Rational>(m, m));
  for (int v = 0; v < nv; ++v)
    for (int r = 0; r < m; ++r) {
      std::vector<Rational> u(m * nv);
      u[r * nv + v] = Rational(1);
      auto img = reduce(u);
      for (int i = 0; i < m; ++i) l[v](i, r) = img[i];
    }
  DenseMatrix<Rational> hm(m, m);
  for (int v = 0; v < nv; ++v)
    if (!h[v].is_zero())
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) hm(i, j) += h[v] * l[v](i, j);
  if (hm.rank() < m) return std::nullopt;
  auto hinv = hm.inverse();
  std::vector<DenseMatrix<Rational>> a;
  for (int v = 0; v < nv; ++v) a.push_back(hinv * l[v]);
  return a;
}

inline DenseMatrix<Rational> power(DenseMatrix<Rational> a, int e) {
  DenseMatrix<Rational> r = DenseMatrix<Rational>::identity(a.rows());
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

inline DenseMatrix<Rational> shifted(const DenseMatrix<Rational>& a, const Rational& lambda) {
  DenseMatrix<Rational> s = a;
  for (int i = 0; i < a.rows(); ++i) s(i, i) -= lambda;
  return s;
}

struct PointSpace {
  std::vector<Rational> point;
  std::vector<std::vector<Rational>> basis;
};

// Joint generalized eigenspaces of commuting operators with rational spectrum.
inline std::vector<PointSpace> joint_eigenspaces(const std::vector<DenseMatrix<Rational>>& a, Rng& rng) {
  const int m = a[0].rows(), nv = static_cast<int>(a.size());
  for (int attempt = 0; attempt < 20; ++attempt) {
    DenseMatrix<Rational> g(m, m);
    for (int v = 0; v < nv; ++v) {
      Rational c(attempt == 0 ? v + 1 : rng.uniform(-20, 20));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) += c * a[v](i, j);
    }
    auto roots = rational_roots(characteristic_polynomial(g));
    if (!roots) continue;
    std::vector<PointSpace> out;
    int total = 0;
    bool separated = true;
    for (const auto& lambda : *roots) {
      auto ker = power(shifted(g, lambda), m).kernel();
      DenseMatrix<Rational> kb(static_cast<int>(ker.size()), m);
      for (int i = 0; i < kb.rows(); ++i)
        for (int j = 0; j < m; ++j) kb(i, j) = ker[i][j];
      kb.rref_in_place();
      PointSpace ps;
      for (int i = 0; i < kb.rows(); ++i) ps.basis.push_back(kb.row(i));
      total += kb.rows();
      // each a_v must have a single eigenvalue on the space
      for (int v = 0; v < nv && separated; ++v) {
        // eigenvalue from the trace of the restriction
        DenseMatrix<Rational> b(m, kb.rows());
        for (int i = 0; i < kb.rows(); ++i)
          for (int j = 0; j < m; ++j) b(j, i) = ps.basis[i][j];
        Rational tr(0);
        for (int i = 0; i < kb.rows(); ++i) {
          auto coords = b.solve(a[v].apply(ps.basis[i]));
          if (!coords) throw InconsistencyError("generalized eigenspace is not invariant");
          tr += (*coords)[i];
        }
        Rational mu = tr / Rational(kb.rows());
        auto nil = power(shifted(a[v], mu), m);
        for (const auto& u : ps.basis)
          for (const auto& c : nil.apply(u))
            if (!c.is_zero()) separated = false;
        ps.point.push_back(mu);
      }
      out.push_back(std::move(ps));
    }
    if (total != m) continue;  // some eigenvalue is irrational
    if (!separated) continue;
    return out;
  }
  throw PreconditionError("could not split the degree-zero part of the Ext module over Q (irrational singular points?)");
}

}  // namespace detail

// Split a minimal tail by singular point. The degree-zero part E_0 = K^m of
// the Ext module carries commuting operators x_v / h for a linear form h
// missing Sing; their joint generalized eigenspaces are the local parts at
// the singular points, and the degree-one relations split accordingly.
// Blocks at the same point are further separated when the resulting matrix
// visibly falls apart into connected pieces; no indecomposability is claimed.
inline BlockDecomposition decompose(const SheafPresentation<Rational>& p, std::uint64_t seed = 0) {
  detail::require_minimal(p, "decompose");
  const int m = p.rows(), q = p.cols(), nv = p.nvars(), n = p.n();
  BlockDecomposition out;
  auto w = detail::column_vectors(p);  // q x m*nv
  auto w_rref = w;
  auto pivots = w_rref.rref_in_place();
  if (static_cast<int>(pivots.size()) != q) throw PreconditionError("columns are linearly dependent: not a minimal presentation");

  Rng rng(seed ^ 0xdec0ULL);
  std::optional<std::vector<DenseMatrix<Rational>>> ops;
  for (int attempt = 0; attempt < 20 && !ops; ++attempt) {
    std::vector<Rational> h(nv);
    for (int v = 0; v < nv; ++v) h[v] = Rational(attempt == 0 ? (v == nv - 1 ? 1 : 0) : rng.uniform(-10, 10));
    ops = detail::degree_zero_operators(w_rref, pivots, m, nv, h);
  }
  if (!ops) throw PreconditionError("no linear form is a nonzerodivisor on the Ext module");
  for (std::size_t i = 0; i < ops->size(); ++i)
    for (std::size_t j = i + 1; j < ops->size(); ++j)
      if (!((*ops)[i] * (*ops)[j] == (*ops)[j] * (*ops)[i])) throw InconsistencyError("degree-zero operators do not commute");
  auto spaces = detail::joint_eigenspaces(*ops, rng);
  for (auto& s : spaces) s.point = detail::normalize_point(s.point);
  std::sort(spaces.begin(), spaces.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(), b.point.end(),
                                        [](const Rational& x, const Rational& y) { return x < y; });
  });
  out.stages.push_back("eigenspace split into " + std::to_string(spaces.size()) + " point(s)");

  // rows: R = B^-1 where the columns of B are the eigenspace bases
  DenseMatrix<Rational> b(m, m);
  std::vector<int> group_of_row;
  int col = 0;
  for (std::size_t g = 0; g < spaces.size(); ++g)
    for (const auto& u : spaces[g].basis) {
      for (int i = 0; i < m; ++i) b(i, col) = u[i];
      group_of_row.push_back(static_cast<int>(g));
      ++col;
    }
  DenseMatrix<Rational> rows = b.inverse();
  auto rp = apply(TransformationRecord<Rational>{rows, DenseMatrix<Rational>::identity(q), DenseMatrix<Rational>::identity(nv)}, p);

  // columns: for each group, the combinations of columns supported on its rows
  auto wr = detail::column_vectors(rp);  // q x m*nv
  DenseMatrix<Rational> cols(q, q);
  std::vector<int> group_of_col;
  int filled = 0;
  for (std::size_t g = 0; g < spaces.size(); ++g) {
    std::vector<int> outside;
    for (int r = 0; r < m; ++r)
      if (group_of_row[r] != static_cast<int>(g))
        for (int v = 0; v < nv; ++v) outside.push_back(r * nv + v);
    DenseMatrix<Rational> cons(static_cast<int>(outside.size()), q);
    for (std::size_t k = 0; k < outside.size(); ++k)
      for (int j = 0; j < q; ++j) cons(static_cast<int>(k), j) = wr(j, outside[k]);
    auto ker = cons.kernel();
    int expect = n * static_cast<int>(spaces[g].basis.size());
    if (static_cast<int>(ker.size()) != expect)
      throw PreconditionError("relations at " + detail::point_to_string(spaces[g].point) + " have dimension " + std::to_string(ker.size()) +
                              ", expected " + std::to_string(expect) + ": no split found");
    for (const auto& c : ker) {
      for (int j = 0; j < q; ++j) cols(j, filled) = c[j];
      group_of_col.push_back(static_cast<int>(g));
      ++filled;
    }
  }
  if (cols.rank() != q) throw InconsistencyError("column transformation is singular");
  out.record = {rows, cols, DenseMatrix<Rational>::identity(nv)};
  out.transformed = apply(out.record, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < q; ++j)
      if (group_of_row[i] != group_of_col[j] && !out.transformed(i, j).is_zero())
        throw InconsistencyError("transformed matrix is not block diagonal");

  // refine each point block by connected components of the transformed matrix
  auto comps = detail::matrix_components(out.transformed);
  std::size_t before = out.blocks.size();
  for (auto& [rs, cs] : comps) {
    int g = group_of_row[rs.front()];
    Block blk{submatrix(out.transformed, rs, cs), spaces[g].point, static_cast<int>(rs.size()), rs, cs};
    auto c = classify_tail(blk.presentation);
    if (!c.is_tail || !c.minimal || c.m != blk.m)
      throw InconsistencyError("block at " + detail::point_to_string(blk.point) + " is not a minimal " + std::to_string(blk.m) + "-tail");
    if (blk.presentation.evaluate(blk.point).rank() >= blk.m)
      throw InconsistencyError("block does not drop rank at " + detail::point_to_string(blk.point));
    out.blocks.push_back(std::move(blk));
  }
  std::stable_sort(out.blocks.begin() + static_cast<std::ptrdiff_t>(before), out.blocks.end(), [](const Block& a, const Block& b) {
    if (a.point != b.point)
      return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(), b.point.end(),
                                          [](const Rational& x, const Rational& y) { return x < y; });
    return a.rows.front() < b.rows.front();
  });
  if (out.blocks.size() > spaces.size()) out.stages.push_back("component refinement into " + std::to_string(out.blocks.size()) + " block(s)");
  int total = 0;
  for (const auto& blk : out.blocks) total += blk.m;
  if (total != m) throw InconsistencyError("block heights do not add up to m");
  return out;
}

// ---- tangent powers ---------------------------------------------------------------

template <Field F>
struct TangentRecognition {
  bool success = false;
  int m = 0;
  int twist = 0;  // common source twist a: F = T(a)^m
  TransformationRecord<F> record;
  std::string reason;
};

// F = T^m on P^N (up to a common twist) iff the s x (N+1)s matrix of linear
// forms has independent columns in S_1^s: then they span it, and a column
// change turns the matrix into s Euler rows.
template <Field F>
TangentRecognition<F> recognize_tangent_power(const SheafPresentation<F>& p) {
  TangentRecognition<F> r;
  const int s = p.rows(), q = p.cols(), nv = p.nvars();
  if (s == 0) throw PreconditionError("empty presentation");
  detail::require_linear(p, "recognize_tangent_power");
  for (int a : p.source_twists())
    if (a != p.source_twists().front()) throw PreconditionError("source twists must be equal");
  for (int b : p.target_twists())
    if (b != p.source_twists().front() + 1) throw PreconditionError("target twists must be one more than the source twists");
  r.twist = p.source_twists().front();
  if (q != nv * s) {
    r.reason = std::to_string(q) + " columns, " + std::to_string(nv * s) + " needed for " + std::to_string(s) + " Euler rows";
    return r;
  }
  auto w = detail::column_vectors(p);  // q x s*nv, square
  int rank = w.rank();
  if (rank < q) {
    r.reason = "columns span only " + std::to_string(rank) + " of " + std::to_string(q) +
               " dimensions: a column reduces to zero, so O(1) splits off the dual";
    return r;
  }
  // column (r, v) of the target is x_v e_r, i.e. coordinate r*nv + v; C = W^-t
  DenseMatrix<F> c = w.transpose().inverse();
  r.record = {DenseMatrix<F>::identity(s), c, DenseMatrix<F>::identity(nv)};
  auto t = apply(r.record, p);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < q; ++j) {
      Poly<F> want = j / nv == i ? Poly<F>::variable(nv, j % nv) : Poly<F>(nv);
      if (!(t(i, j) == want)) throw InconsistencyError("tangent recognition failed to reach Euler rows");
    }
  r.success = true;
  r.m = s;
  return r;
}

// ---- level splitting --------------------------------------------------------------

template <Field F>
struct LevelSplit {
  SheafPresentation<F> minimal_part;
  std::vector<int> summands;       // twists b of the O(b) summands
  std::vector<int> minimal_columns;
  int m = 0;
  int shift = 0;                   // normalizing twist
  bool verified = false;
  std::string diagnostics;
};

namespace detail {

// Express v (degree d entries, one per row) as sum_k g_k * cols[k] with
// deg g_k = d - 1, cols linear. Returns the g_k or nothing.
template <Field F>
std::optional<std::vector<Poly<F>>> linear_combination(const std::vector<std::vector<Poly<F>>>& cols, const std::vector<Poly<F>>& v,
                                                       int d, int nvars) {
  int s = static_cast<int>(v.size());
  auto src = monomial_basis(nvars, d - 1);
  auto dst = monomial_basis(nvars, d);
  auto idx = index_of(dst);
  int nd = static_cast<int>(dst.size()), ns = static_cast<int>(src.size());
  DenseMatrix<F> a(s * nd, static_cast<int>(cols.size()) * ns);
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (int u = 0; u < ns; ++u)
      for (int r = 0; r < s; ++r)
        for (const auto& [mono, c] : cols[k][r].terms()) a(r * nd + idx.at(src[u] * mono), static_cast<int>(k) * ns + u) += c;
  std::vector<F> rhs(s * nd);
  for (int r = 0; r < s; ++r)
    for (const auto& [mono, c] : v[r].terms()) rhs[r * nd + idx.at(mono)] = c;
  auto sol = a.solve(rhs);
  if (!sol) return std::nullopt;
  std::vector<Poly<F>> g;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<typename Poly<F>::Term> terms;
    for (int u = 0; u < ns; ++u)
      if (!(*sol)[k * ns + u].is_zero()) terms.emplace_back(src[u], (*sol)[k * ns + u]);
    g.emplace_back(nvars, std::move(terms));
  }
  return g;
}

template <Field F>
CohomologyTable add_tables(CohomologyTable a, const CohomologyTable& b) {
  for (std::size_t t = 0; t < a.h.size(); ++t)
    for (std::size_t i = 0; i < a.h[t].size(); ++i) a.h[t][i] += b.h[t][i];
  return a;
}

}  // namespace detail

template <Field F>
LevelSplit<F> split_level(const SheafPresentation<F>& p) {
  auto c = classify_tail(p);
  if (!c.is_tail || !c.level) throw PreconditionError("split_level needs a level tail");
  LevelSplit<F> out;
  out.m = static_cast<int>(c.m);
  out.shift = c.k + p.n() + 1;
  auto np = twist(p, out.shift);
  const int n = p.n(), nv = p.nvars(), s = np.rows();
  std::vector<int> lin;
  for (int j = 0; j < np.cols(); ++j)
    if (np.target_twists()[j] == 1) lin.push_back(j);
  std::vector<int> all_rows(s);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  auto w = detail::column_vectors(submatrix(np, all_rows, lin));  // |lin| x s*nv
  // greedy pivots in column order
  std::vector<int> pivots;
  std::vector<std::vector<F>> kept;
  for (int k = 0; k < static_cast<int>(lin.size()); ++k) {
    kept.push_back(w.row(k));
    DenseMatrix<F> t(static_cast<int>(kept.size()), s * nv);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (int u = 0; u < s * nv; ++u) t(static_cast<int>(i), u) = kept[i][u];
    if (t.rank() < static_cast<int>(kept.size())) kept.pop_back();
    else pivots.push_back(lin[k]);
  }
  if (static_cast<int>(pivots.size()) != n * out.m)
    throw PreconditionError("the degree-one block has " + std::to_string(pivots.size()) + " independent columns, expected " +
                            std::to_string(n * out.m) + ": not a level tail");
  std::vector<std::vector<Poly<F>>> pcols;
  for (int j : pivots) {
    std::vector<Poly<F>> v;
    for (int r = 0; r < s; ++r) v.push_back(np(r, j));
    pcols.push_back(std::move(v));
  }
  std::ostringstream diag;
  for (int j = 0; j < np.cols(); ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
    int b = np.target_twists()[j];
    std::vector<Poly<F>> v;
    for (int r = 0; r < s; ++r) v.push_back(np(r, j));
    bool zero = std::all_of(v.begin(), v.end(), [](const Poly<F>& f) { return f.is_zero(); });
    if (!zero && !detail::linear_combination(pcols, v, b, nv))
      throw PreconditionError("column " + std::to_string(j) + " is not in the span of the minimal part");
    out.summands.push_back(b - out.shift);
  }
  out.minimal_columns = pivots;
  out.minimal_part = twist(submatrix(np, all_rows, pivots), -out.shift);

  // verification: cohomology tables and Fitting ideals of P and the direct sum.
  // Column operations leave dense high-degree entries, where the Hilbert
  // series route is far cheaper than degree-by-degree elimination.
  auto [lo, hi] = default_window(p);
  auto tp = groebner_table(p, lo, hi);
  auto sum = groebner_table(out.minimal_part, lo, hi);
  if (!out.summands.empty()) sum = detail::add_tables<F>(sum, groebner_table(line_bundles<F>(n, out.summands), lo, hi));
  bool tables = tp.h == sum.h;
  bool fitting = fitting_ideal(p) == fitting_ideal(out.minimal_part);
  out.verified = tables && fitting;
  diag << "cohomology tables " << (tables ? "agree" : "differ") << " on [" << lo << ", " << hi << "]; Fitting ideals "
       << (fitting ? "agree" : "differ");
  out.diagnostics = diag.str();
  return out;
}

// ---- extension blocks --------------------------------------------------------------

template <Field F>
struct ExtensionBlocks {
  int l = 0;  // leading rows of the form (0 .. X .. 0)
  SheafPresentation<F> h;  // delete row i and column block i
  SheafPresentation<F> g;  // rows {i} + trailing, column blocks {i} + trailing
};

// Number of leading rows r whose only nonzero block is block r, equal to the X of row 0.
template <Field F>
int leading_diagonal_rows(const SheafPresentation<F>& p) {
  const int n = p.n(), m = p.rows();
  if (p.cols() != n * m) return 0;
  int l = 0;
  for (int r = 0; r < m; ++r) {
    bool ok = true;
    for (int j = 0; j < p.cols() && ok; ++j) {
      int blk = j / n;
      if (blk != r) ok = p(r, j).is_zero();
      else ok = p(r, j) == p(0, j % n) && !p(r, j).is_zero();
    }
    if (!ok) break;
    ++l;
  }
  return l;
}

template <Field F>
ExtensionBlocks<F> extension_blocks(const SheafPresentation<F>& p, int i) {
  const int n = p.n(), m = p.rows();
  detail::require_linear(p, "extension_blocks");
  if (p.cols() != n * m) throw PreconditionError("expected an m x nm matrix");
  int l = leading_diagonal_rows(p);
  if (l == 0) throw PreconditionError("first row is not of the form (X, 0, .., 0)");
  if (i < 0 || i >= l) throw PreconditionError("block index " + std::to_string(i) + " out of range [0, " + std::to_string(l) + ")");
  std::vector<int> hr, hc, gr{i}, gc;
  for (int r = 0; r < m; ++r)
    if (r != i) hr.push_back(r);
  for (int j = 0; j < p.cols(); ++j)
    if (j / n != i) hc.push_back(j);
  for (int k = 0; k < n; ++k) gc.push_back(i * n + k);
  for (int r = l; r < m; ++r) {
    gr.push_back(r);
    for (int k = 0; k < n; ++k) gc.push_back(r * n + k);
  }
  return {l, sub_presentation(p, hr, hc), sub_presentation(p, gr, gc)};
}

// ---- scrambling (test and demo support) --------------------------------------------

// Random invertible scalar row and column operations within equal-twist
// groups and, optionally, a random coordinate change.
template <Field F>
std::pair<SheafPresentation<F>, TransformationRecord<F>> scramble(const SheafPresentation<F>& p, std::uint64_t seed, bool coordinates = true) {
  Rng rng(seed);
  auto grouped = [&](const std::vector<int>& tw) {
    int k = static_cast<int>(tw.size());
    DenseMatrix<F> a = DenseMatrix<F>::identity(k);
    for (int lo = 0; lo < k;) {
      int hi = lo;
      while (hi < k && tw[hi] == tw[lo]) ++hi;
      auto blk = detail::random_invertible<F>(hi - lo, rng);
      for (int i = 0; i < hi - lo; ++i)
        for (int j = 0; j < hi - lo; ++j) a(lo + i, lo + j) = blk(i, j);
      lo = hi;
    }
    return a;
  };
  TransformationRecord<F> rec{grouped(p.source_twists()), grouped(p.target_twists()),
                              coordinates ? detail::random_invertible<F>(p.nvars(), rng) : DenseMatrix<F>::identity(p.nvars())};
  return {apply(rec, p), rec};
}

// Column operations with polynomial coefficients: column j += g * column i for
// b_i < b_j, plus scalar mixing among equal twists. Keeps the sheaf.
template <Field F>
SheafPresentation<F> scramble_columns(const SheafPresentation<F>& p, std::uint64_t seed) {
  Rng rng(seed);
  auto [scalar, rec] = scramble(p, seed, false);
  auto m = scalar.matrix();
  const int nv = p.nvars();
  const auto& b = p.target_twists();
  for (int j = 0; j < p.cols(); ++j)
    for (int i = 0; i < p.cols(); ++i) {
      if (b[i] >= b[j]) continue;
      Poly<F> g(nv);
      for (const auto& mono : monomial_basis(nv, b[j] - b[i])) g += Poly<F>(nv, {{mono, F(rng.uniform(-2, 2))}});
      for (int r = 0; r < p.rows(); ++r) m[r][j] += g * m[r][i];
    }
  return SheafPresentation<F>(p.n(), p.source_twists(), p.target_twists(), std::move(m));
}

}  // namespace tailsheaf
