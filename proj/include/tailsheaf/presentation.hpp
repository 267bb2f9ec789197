#pragma once

// A sheaf F on P^n given by 0 -> (+) O(a_i) -> (+) O(b_j) -> F -> 0.
// The matrix is stored with rows indexing the source summands O(a_i) and
// columns indexing the target summands O(b_j); entry (i, j) is a form of
// degree b_j - a_i.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "poly.hpp"

namespace tailsheaf {

template <Field F>
class SheafPresentation {
 public:
  using Matrix = std::vector<std::vector<Poly<F>>>;

  SheafPresentation() = default;

  // Checks shape, degree compatibility and minimality; injectivity is a
  // separate (more expensive) check, see validate_presentation.
  SheafPresentation(int n, std::vector<int> source, std::vector<int> target, Matrix matrix)
      : n_(n), source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (n < 1 || n + 1 > kMaxVars) throw ValidationError("unsupported projective dimension " + std::to_string(n));
    if (matrix_.size() != source_.size())
      throw ValidationError("matrix has " + std::to_string(matrix_.size()) + " rows but " + std::to_string(source_.size()) + " source twists");
    for (std::size_t i = 0; i < matrix_.size(); ++i) {
      if (matrix_[i].size() != target_.size())
        throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(matrix_[i].size()) + " entries but there are " +
                              std::to_string(target_.size()) + " target twists");
      for (std::size_t j = 0; j < target_.size(); ++j) {
        const auto& e = matrix_[i][j];
        if (e.nvars() != n + 1) throw ValidationError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") lives in the wrong ring");
        if (e.is_zero()) continue;
        int want = target_[j] - source_[i];
        if (want <= 0)
          throw ValidationError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be zero: target twist " +
                                std::to_string(target_[j]) + " does not exceed source twist " + std::to_string(source_[i]) +
                                " (a nonzero entry there is not minimal)");
        if (!e.is_homogeneous() || e.degree() != want)
          throw ValidationError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + e.to_string() +
                                " must be a form of degree " + std::to_string(want));
      }
    }
  }

  static SheafPresentation empty(int n) { return SheafPresentation(n, {}, {}, {}); }

  int n() const { return n_; }
  int nvars() const { return n_ + 1; }
  int rows() const { return static_cast<int>(source_.size()); }
  int cols() const { return static_cast<int>(target_.size()); }
  int rank() const { return cols() - rows(); }
  bool is_empty() const { return source_.empty() && target_.empty(); }
  const std::vector<int>& source_twists() const { return source_; }
  const std::vector<int>& target_twists() const { return target_; }
  const Matrix& matrix() const { return matrix_; }
  const Poly<F>& operator()(int i, int j) const { return matrix_[i][j]; }

  bool twists_sorted() const { return std::is_sorted(source_.begin(), source_.end()) && std::is_sorted(target_.begin(), target_.end()); }

  // Matrix of scalars at a point of P^n.
  DenseMatrix<F> evaluate(const std::vector<F>& point) const {
    DenseMatrix<F> m(rows(), cols());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) m(i, j) = matrix_[i][j].evaluate(point);
    return m;
  }

  friend bool operator==(const SheafPresentation& a, const SheafPresentation& b) {
    return a.n_ == b.n_ && a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
  }

 private:
  int n_ = 1;
  std::vector<int> source_, target_;
  Matrix matrix_;
};

// Row operations R (s x s), column operations C (q x q) and a coordinate change
// T ((n+1) x (n+1)): the transformed matrix is R * (M after x_i -> sum_j T(i,j) x_j) * C.
template <Field F>
struct TransformationRecord {
  DenseMatrix<F> rows, cols, coords;

  static TransformationRecord identity(int s, int q, int nvars) {
    return {DenseMatrix<F>::identity(s), DenseMatrix<F>::identity(q), DenseMatrix<F>::identity(nvars)};
  }
};

template <Field F>
typename SheafPresentation<F>::Matrix change_coordinates(const typename SheafPresentation<F>::Matrix& m, const DenseMatrix<F>& t) {
  auto out = m;
  for (auto& row : out)
    for (auto& e : row) e = change_coordinates(e, t);
  return out;
}

// R * M * C with scalar matrices.
template <Field F>
typename SheafPresentation<F>::Matrix scalar_sandwich(const DenseMatrix<F>& r, const typename SheafPresentation<F>::Matrix& m,
                                                     const DenseMatrix<F>& c, int nvars) {
  int s = r.rows(), q = c.cols();
  int mid_r = r.cols(), mid_c = c.rows();
  typename SheafPresentation<F>::Matrix tmp(s, std::vector<Poly<F>>(mid_c, Poly<F>(nvars)));
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < mid_r; ++k)
      if (!r(i, k).is_zero())
        for (int j = 0; j < mid_c; ++j)
          if (!m[k][j].is_zero()) tmp[i][j] += r(i, k) * m[k][j];
  typename SheafPresentation<F>::Matrix out(s, std::vector<Poly<F>>(q, Poly<F>(nvars)));
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < mid_c; ++k)
      if (!tmp[i][k].is_zero())
        for (int j = 0; j < q; ++j)
          if (!c(k, j).is_zero()) out[i][j] += c(k, j) * tmp[i][k];
  return out;
}

template <Field F>
SheafPresentation<F> apply(const TransformationRecord<F>& rec, const SheafPresentation<F>& p) {
  auto m = scalar_sandwich(rec.rows, change_coordinates<F>(p.matrix(), rec.coords), rec.cols, p.nvars());
  return SheafPresentation<F>(p.n(), p.source_twists(), p.target_twists(), std::move(m));
}

template <Field F>
TransformationRecord<F> inverse(const TransformationRecord<F>& rec) {
  // M' = R M(Tx) C gives M = R^-1 M'(T^-1 x) C^-1; scalar row and column
  // operations commute with the substitution.
  return {rec.rows.inverse(), rec.cols.inverse(), rec.coords.inverse()};
}

template <Field F>
SheafPresentation<F> twist(const SheafPresentation<F>& p, int t) {
  auto a = p.source_twists(), b = p.target_twists();
  for (auto& x : a) x += t;
  for (auto& x : b) x += t;
  return SheafPresentation<F>(p.n(), std::move(a), std::move(b), p.matrix());
}

template <Field F>
struct DirectSum {
  SheafPresentation<F> sum;
  std::vector<int> row_order;  // row_order[k] = index of the k-th row in the concatenation
  std::vector<int> col_order;
};

// Stable sort of the concatenated twists; the block structure survives as the permutations.
template <Field F>
DirectSum<F> direct_sum(const SheafPresentation<F>& p1, const SheafPresentation<F>& p2) {
  if (p1.n() != p2.n()) throw PreconditionError("direct sum of presentations over different projective spaces");
  int s1 = p1.rows(), q1 = p1.cols();
  std::vector<int> a = p1.source_twists(), b = p1.target_twists();
  a.insert(a.end(), p2.source_twists().begin(), p2.source_twists().end());
  b.insert(b.end(), p2.target_twists().begin(), p2.target_twists().end());
  std::vector<int> ro(a.size()), co(b.size());
  std::iota(ro.begin(), ro.end(), 0);
  std::iota(co.begin(), co.end(), 0);
  std::stable_sort(ro.begin(), ro.end(), [&](int x, int y) { return a[x] < a[y]; });
  std::stable_sort(co.begin(), co.end(), [&](int x, int y) { return b[x] < b[y]; });
  auto entry = [&](int i, int j) -> Poly<F> {
    if (i < s1 && j < q1) return p1(i, j);
    if (i >= s1 && j >= q1) return p2(i - s1, j - q1);
    return Poly<F>(p1.nvars());
  };
  typename SheafPresentation<F>::Matrix m(a.size(), std::vector<Poly<F>>(b.size(), Poly<F>(p1.nvars())));
  std::vector<int> sa, sb;
  for (int k : ro) sa.push_back(a[k]);
  for (int k : co) sb.push_back(b[k]);
  for (std::size_t i = 0; i < ro.size(); ++i)
    for (std::size_t j = 0; j < co.size(); ++j) m[i][j] = entry(ro[i], co[j]);
  return {SheafPresentation<F>(p1.n(), std::move(sa), std::move(sb), std::move(m)), std::move(ro), std::move(co)};
}

template <Field F>
SheafPresentation<F> line_bundles(int n, const std::vector<int>& twists) {
  std::vector<int> b = twists;
  std::sort(b.begin(), b.end());
  return SheafPresentation<F>(n, {}, std::move(b), {});
}

// Submatrix on the given rows and columns (in the given order).
template <Field F>
SheafPresentation<F> submatrix(const SheafPresentation<F>& p, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> a, b;
  for (int i : rows) {
    if (i < 0 || i >= p.rows()) throw PreconditionError("row index " + std::to_string(i) + " out of range");
    a.push_back(p.source_twists()[i]);
  }
  for (int j : cols) {
    if (j < 0 || j >= p.cols()) throw PreconditionError("column index " + std::to_string(j) + " out of range");
    b.push_back(p.target_twists()[j]);
  }
  typename SheafPresentation<F>::Matrix m;
  for (int i : rows) {
    std::vector<Poly<F>> r;
    for (int j : cols) r.push_back(p(i, j));
    m.push_back(std::move(r));
  }
  return SheafPresentation<F>(p.n(), std::move(a), std::move(b), std::move(m));
}

// ---- text format -------------------------------------------------------------

struct TextHeader {
  int n = 0;
  std::string field;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

struct Line {
  int number;
  std::string keyword;
  std::string rest;
  int rest_column;  // 1-based column where `rest` starts
};

inline std::vector<Line> tokenize_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t k = 0;
    while (k < raw.size() && std::isspace(static_cast<unsigned char>(raw[k]))) ++k;
    if (k == raw.size()) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t kw = k;
    while (k < raw.size() && !std::isspace(static_cast<unsigned char>(raw[k]))) ++k;
    out.push_back({number, std::string(raw.substr(kw, k - kw)), std::string(raw.substr(k)), static_cast<int>(k) + 1});
    if (end == text.size()) break;
  }
  return out;
}

inline std::vector<int> parse_ints(const Line& l) {
  std::vector<int> out;
  std::istringstream is(l.rest);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      auto col = l.rest_column + static_cast<int>(l.rest.find(tok));
      throw ParseError("expected an integer twist, got '" + tok + "'", l.number, col);
    }
  }
  return out;
}

inline TextHeader parse_header(const Line& l) {
  if (l.keyword != "ring") throw ParseError("expected 'ring n=<dim> field=<QQ|fp:p>' first", l.number, 1);
  TextHeader h;
  bool have_n = false;
  std::istringstream is(l.rest);
  std::string tok;
  while (is >> tok) {
    int col = l.rest_column + static_cast<int>(l.rest.find(tok));
    if (tok.rfind("n=", 0) == 0) {
      try {
        h.n = std::stoi(tok.substr(2));
      } catch (const std::exception&) {
        throw ParseError("bad projective dimension '" + tok + "'", l.number, col);
      }
      have_n = true;
    } else if (tok.rfind("field=", 0) == 0) {
      h.field = tok.substr(6);
      if (h.field != "QQ" && h.field.rfind("fp:", 0) != 0) throw ParseError("unknown field '" + h.field + "'", l.number, col);
    } else {
      throw ParseError("unexpected token '" + tok + "' in ring statement", l.number, col);
    }
  }
  if (!have_n) throw ParseError("ring statement needs n=<dim>", l.number, 1);
  if (h.n < 1 || h.n + 1 > kMaxVars) throw ParseError("unsupported projective dimension " + std::to_string(h.n), l.number, 1);
  if (h.field.empty()) h.field = "QQ";
  return h;
}

}  // namespace detail

inline TextHeader read_header(std::string_view text) {
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  return detail::parse_header(lines.front());
}

// Parses the line format; the field tag must match F unless `check_field` is off.
template <Field F>
SheafPresentation<F> parse_presentation(std::string_view text, bool check_field = true) {
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  TextHeader h = detail::parse_header(lines.front());
  if (check_field && h.field != F::name())
    throw ParseError("input is over " + h.field + " but the computation runs over " + F::name(), lines.front().number, 1);
  std::vector<int> source, target;
  bool have_source = false, have_target = false;
  typename SheafPresentation<F>::Matrix matrix;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.keyword == "source") {
      if (have_source) throw ParseError("duplicate source statement", l.number, 1);
      source = detail::parse_ints(l);
      have_source = true;
    } else if (l.keyword == "target") {
      if (have_target) throw ParseError("duplicate target statement", l.number, 1);
      target = detail::parse_ints(l);
      have_target = true;
    } else if (l.keyword == "row") {
      if (!have_source || !have_target) throw ParseError("row before source and target statements", l.number, 1);
      std::vector<Poly<F>> row;
      std::size_t start = 0;
      while (true) {
        std::size_t comma = l.rest.find(',', start);
        std::string_view piece = std::string_view(l.rest).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        row.push_back(parse_poly<F>(piece, h.n + 1, l.number, l.rest_column - 1 + static_cast<int>(start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (row.size() != target.size())
        throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(target.size()), l.number, 1);
      matrix.push_back(std::move(row));
    } else {
      throw ParseError("unknown statement '" + l.keyword + "'", l.number, 1);
    }
  }
  if (!have_source || !have_target) throw ParseError("missing source or target statement", lines.back().number, 1);
  if (matrix.size() != source.size())
    throw ParseError("expected " + std::to_string(source.size()) + " rows, found " + std::to_string(matrix.size()), lines.back().number, 1);
  if (target.empty()) throw ValidationError("presentation has no target summands");
  SheafPresentation<F> p(h.n, std::move(source), std::move(target), std::move(matrix));
  if (!p.twists_sorted()) throw ValidationError("source and target twists must be listed in nondecreasing order");
  return p;
}

template <Field F>
std::string to_text(const SheafPresentation<F>& p) {
  std::ostringstream os;
  os << "ring n=" << p.n() << " field=" << F::name() << "\n";
  os << "source";
  for (int a : p.source_twists()) os << " " << a;
  os << "\ntarget";
  for (int b : p.target_twists()) os << " " << b;
  os << "\n";
  for (int i = 0; i < p.rows(); ++i) {
    os << "row ";
    for (int j = 0; j < p.cols(); ++j) os << (j ? ", " : "") << p(i, j).to_string();
    os << "\n";
  }
  return os.str();
}

}  // namespace tailsheaf
