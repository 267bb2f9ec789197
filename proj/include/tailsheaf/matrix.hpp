#pragma once

// Exact dense matrices over a Field, plus a sparse row-echelon accumulator used
// for the large but very sparse multiplication matrices of the cohomology engine.

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "field.hpp"

namespace tailsheaf {

template <Field F>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw PreconditionError("negative matrix dimension");
  }
  DenseMatrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : init) {
      if (static_cast<int>(r.size()) != cols_) throw PreconditionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const F& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<F> row(int i) const {
    return std::vector<F>(data_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
                          data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
  }
  std::vector<F> column(int j) const {
    std::vector<F> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const F& x) { return x.is_zero(); });
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product dimension mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const F& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  std::vector<F> apply(const std::vector<F>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw PreconditionError("matrix-vector dimension mismatch");
    std::vector<F> out(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!v[j].is_zero() && !(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("matrix sum dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("matrix difference dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // Row-reduced echelon form in place; returns the pivot columns.
  std::vector<int> rref_in_place() {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
      int p = -1;
      for (int i = r; i < rows_; ++i)
        if (!(*this)(i, c).is_zero()) { p = i; break; }
      if (p < 0) continue;
      swap_rows(p, r);
      F inv = F(1) / (*this)(r, c);
      for (int j = c; j < cols_; ++j) (*this)(r, j) *= inv;
      for (int i = 0; i < rows_; ++i) {
        if (i == r || (*this)(i, c).is_zero()) continue;
        F f = (*this)(i, c);
        for (int j = c; j < cols_; ++j)
          if (!(*this)(r, j).is_zero()) (*this)(i, j) -= f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  int rank() const {
    if constexpr (is_rational_v<F>) {
      return bareiss_rank();
    } else {
      DenseMatrix copy = *this;
      return static_cast<int>(copy.rref_in_place().size());
    }
  }

  // Basis of {v : M v = 0}, one vector per free column.
  std::vector<std::vector<F>> kernel() const {
    DenseMatrix r = *this;
    auto pivots = r.rref_in_place();
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<F> v(cols_);
      v[free] = F(1);
      for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(static_cast<int>(k), free);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  std::vector<std::vector<F>> left_kernel() const { return transpose().kernel(); }

  // Some x with M x = b, if one exists.
  std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
    if (static_cast<int>(b.size()) != rows_) throw PreconditionError("right-hand side dimension mismatch");
    DenseMatrix aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_) = b[i];
    }
    auto pivots = aug.rref_in_place();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<F> x(cols_);
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug(static_cast<int>(k), cols_);
    return x;
  }

  DenseMatrix inverse() const {
    if (rows_ != cols_) throw PreconditionError("inverse of a non-square matrix");
    DenseMatrix aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = F(1);
    }
    auto pivots = aug.rref_in_place();
    if (static_cast<int>(pivots.size()) < rows_ || (rows_ > 0 && pivots[rows_ - 1] >= cols_)) {
      throw PreconditionError("matrix is singular");
    }
    DenseMatrix inv(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  friend std::ostream& operator<<(std::ostream& os, const DenseMatrix& m) {
    for (int i = 0; i < m.rows_; ++i) {
      os << "[";
      for (int j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j).to_string();
      os << "]\n";
    }
    return os;
  }

 private:
  // Fraction-free elimination: clear denominators row by row, then Bareiss over Z.
  int bareiss_rank() const {
    std::vector<std::vector<mpz_class>> a(rows_, std::vector<mpz_class>(cols_));
    for (int i = 0; i < rows_; ++i) {
      mpz_class l = 1;
      for (int j = 0; j < cols_; ++j) {
        const auto& den = (*this)(i, j).value().get_den();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
      }
      for (int j = 0; j < cols_; ++j) {
        const auto& q = (*this)(i, j).value();
        a[i][j] = q.get_num() * (l / q.get_den());
      }
    }
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
      int p = -1;
      for (int i = r; i < rows_; ++i)
        if (sgn(a[i][c]) != 0) { p = i; break; }
      if (p < 0) continue;
      std::swap(a[p], a[r]);
      for (int i = r + 1; i < rows_; ++i) {
        for (int j = c + 1; j < cols_; ++j) {
          a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
          mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
        }
        a[i][c] = 0;
      }
      prev = a[r][c];
      ++r;
    }
    return r;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<F> data_;
};

// Incremental echelon basis of sparse rows. Rows are (column, value) lists
// sorted by column; add() reports whether the row enlarged the span.
template <Field F>
class SparseEchelon {
 public:
  using Row = std::vector<std::pair<int, F>>;

  explicit SparseEchelon(int cols) : pivot_of_(cols, -1) {}

  bool add(Row row) {
    Row scratch;
    while (!row.empty()) {
      int lead = row.front().first;
      int p = pivot_of_[lead];
      if (p < 0) {
        F inv = F(1) / row.front().second;
        for (auto& e : row) e.second *= inv;
        pivot_of_[lead] = static_cast<int>(basis_.size());
        basis_.push_back(std::move(row));
        return true;
      }
      const Row& piv = basis_[p];
      F factor = row.front().second;
      scratch.clear();
      scratch.reserve(row.size() + piv.size());
      std::size_t i = 1, j = 1;
      while (i < row.size() || j < piv.size()) {
        if (j >= piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.push_back(std::move(row[i++]));
        } else if (i >= row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, -(factor * piv[j].second));
          ++j;
        } else {
          F v = row[i].second - factor * piv[j].second;
          if (!v.is_zero()) scratch.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      std::swap(row, scratch);
    }
    return false;
  }

  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  std::vector<int> pivot_of_;
  std::vector<Row> basis_;
};


// Row echelon over Z for rational input: rows are scaled to primitive integer
// vectors and reduced by cross-multiplication, which keeps entries far
// smaller than Gauss-Jordan over Q on dense rows.
class IntegerEchelon {
 public:
  using Row = std::vector<std::pair<int, mpz_class>>;

  explicit IntegerEchelon(int cols) : pivot_of_(cols, -1) {}

  bool add(const std::vector<std::pair<int, Rational>>& in) {
    mpz_class den = 1;
    for (const auto& [c, v] : in) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.value().get_den_mpz_t());
    Row row;
    row.reserve(in.size());
    for (const auto& [c, v] : in) row.emplace_back(c, mpz_class(v.value().get_num() * (den / v.value().get_den())));
    Row scratch;
    mpz_class g, a, b;
    while (!row.empty()) {
      make_primitive(row);
      int p = pivot_of_[row.front().first];
      if (p < 0) {
        pivot_of_[row.front().first] = static_cast<int>(basis_.size());
        basis_.push_back(std::move(row));
        return true;
      }
      const Row& piv = basis_[p];
      mpz_gcd(g.get_mpz_t(), row.front().second.get_mpz_t(), piv.front().second.get_mpz_t());
      a = piv.front().second / g;  // row * a - piv * b
      b = row.front().second / g;
      scratch.clear();
      scratch.reserve(row.size() + piv.size());
      std::size_t i = 1, j = 1;
      while (i < row.size() || j < piv.size()) {
        if (j >= piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.emplace_back(row[i].first, row[i].second * a);
          ++i;
        } else if (i >= row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, -(piv[j].second * b));
          ++j;
        } else {
          mpz_class v = row[i].second * a - piv[j].second * b;
          if (sgn(v) != 0) scratch.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      std::swap(row, scratch);
    }
    return false;
  }

  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  static void make_primitive(Row& row) {
    mpz_class g = 0;
    for (const auto& [c, v] : row) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) return;
    }
    for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }

  std::vector<int> pivot_of_;
  std::vector<Row> basis_;
};

}  // namespace tailsheaf
