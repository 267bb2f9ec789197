#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailsheaf/poly.hpp"

using namespace tailsheaf;
using Q = Rational;
using PQ = Poly<Q>;

namespace {

PQ P(const char* s, int nvars) { return parse_poly<Q>(s, nvars); }

template <Field F>
DenseMatrix<F> random_matrix(Rng& rng, int r, int c, int lo = -5, int hi = 5) {
  DenseMatrix<F> m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = F(rng.uniform(lo, hi));
  return m;
}

template <Field F>
DenseMatrix<F> random_invertible(Rng& rng, int n) {
  while (true) {
    auto m = random_matrix<F>(rng, n, n);
    if (m.rank() == n) return m;
  }
}

}  // namespace

TEST(Rational, ExactArithmetic) {
  Q a(3, 7), b(-2, 5);
  EXPECT_EQ((a / b) * (b / a), Q(1));
  EXPECT_EQ(a + b, Q(1, 35));
  EXPECT_EQ(Q::parse("-6/4").to_string(), "-3/2");
  EXPECT_THROW(Q(1) / Q(0), PreconditionError);
  EXPECT_THROW(Q::parse("1/0"), PreconditionError);
  EXPECT_THROW(Q::parse("abc"), PreconditionError);
}

TEST(PrimeField, ArithmeticAndScope) {
  EXPECT_EQ(Zp::modulus(), Zp::kDefaultPrime);
  Zp a(5), b(-3);
  EXPECT_EQ((a / b) * b, a);
  EXPECT_EQ(Zp(-1).to_string(), "-1");
  {
    PrimeFieldScope scope(7);
    EXPECT_EQ(Zp(10), Zp(3));
    EXPECT_EQ(Zp::parse("1/2") * Zp(2), Zp(1));
    EXPECT_EQ(Zp::name(), "fp:7");
  }
  EXPECT_EQ(Zp::modulus(), Zp::kDefaultPrime);
  EXPECT_THROW(PrimeFieldScope(12), PreconditionError);
  EXPECT_THROW(Zp(0).inverse(), PreconditionError);
}

TEST(Rng, PortableSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(-10, 10), b.uniform(-10, 10));
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    auto v = c.uniform(-3, 4);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 4);
  }
}

TEST(DenseMatrix, RankMatchesNaiveOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int r = static_cast<int>(rng.uniform(1, 7)), c = static_cast<int>(rng.uniform(1, 7));
    auto m = random_matrix<Q>(rng, r, c, -2, 2);
    // Force some rank deficiency now and then.
    if (r > 2 && trial % 3 == 0) {
      for (int j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * Q(2) - m(1, j);
    }
    EXPECT_EQ(m.rank(), oracle::rank(oracle::to_mpq(m)));
    EXPECT_EQ(m.rank(), m.transpose().rank());
    EXPECT_EQ(static_cast<int>(m.kernel().size()) + m.rank(), c);
    for (const auto& v : m.kernel())
      for (const auto& x : m.apply(v)) EXPECT_TRUE(x.is_zero());
  }
}

template <class F>
void rank_invariance() {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix<F>(rng, 6, 6, -3, 3);
    if (trial % 2) {
      for (int j = 0; j < 6; ++j) m(5, j) = m(0, j) + m(1, j);
    }
    int r = m.rank();
    EXPECT_LE(r, 6);
    auto g = random_invertible<F>(rng, 6), h = random_invertible<F>(rng, 6);
    EXPECT_EQ((g * m * h).rank(), r);
    auto p = m;
    p.swap_rows(0, 3);
    p.swap_cols(1, 4);
    EXPECT_EQ(p.rank(), r);
  }
}

TEST(DenseMatrix, RankInvarianceRationals) { rank_invariance<Q>(); }
TEST(DenseMatrix, RankInvariancePrimeField) { rank_invariance<Zp>(); }

TEST(DenseMatrix, SolveAndInverse) {
  Rng rng(3);
  auto a = random_invertible<Q>(rng, 5);
  auto inv = a.inverse();
  EXPECT_EQ(a * inv, DenseMatrix<Q>::identity(5));
  std::vector<Q> b{1, 2, 3, 4, 5};
  auto x = a.solve(b);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(a.apply(*x), b);
  DenseMatrix<Q> sing{{1, 2}, {2, 4}};
  EXPECT_THROW(sing.inverse(), PreconditionError);
  EXPECT_FALSE(sing.solve({1, 0}).has_value());
  auto lk = sing.left_kernel();
  ASSERT_EQ(lk.size(), 1u);
  EXPECT_EQ(lk[0][0] * Q(1) + lk[0][1] * Q(2), Q(0));
}

TEST(SparseEchelon, AgreesWithDenseRank) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix<Q>(rng, 8, 10, -1, 1);
    SparseEchelon<Q> e(10);
    for (int i = 0; i < 8; ++i) {
      SparseEchelon<Q>::Row row;
      for (int j = 0; j < 10; ++j)
        if (!m(i, j).is_zero()) row.emplace_back(j, m(i, j));
      e.add(row);
    }
    EXPECT_EQ(e.rank(), m.rank());
  }
}

TEST(MonomialBasis, SizesAndOrder) {
  auto b = monomial_basis(2, 2);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].to_string(2), "x0^2");
  EXPECT_EQ(b[1].to_string(2), "x0*x1");
  EXPECT_EQ(b[2].to_string(2), "x1^2");
  EXPECT_TRUE(monomial_basis(4, -1).empty());
  EXPECT_EQ(monomial_basis(4, 12).size(), static_cast<std::size_t>(oracle::binomial(15, 3)));
  for (int n = 1; n <= 5; ++n)
    for (int d = 0; d <= 8; ++d) {
      EXPECT_EQ(graded_dimension(n + 1, d), oracle::binomial(n + d, n));
      EXPECT_EQ(static_cast<long long>(monomial_basis(n + 1, d).size()), oracle::binomial(n + d, n));
      if (d > 0) {
        EXPECT_EQ(graded_dimension(n + 1, d), graded_dimension(n + 1, d - 1) + graded_dimension(n, d));
      }
    }
}

TEST(MonomialBasis, GrevlexTieBreak) {
  // x1^2 > x0*x2 in grevlex with x0 > x1 > x2.
  auto b = monomial_basis(3, 2);
  std::vector<std::string> s;
  for (auto& m : b) s.push_back(m.to_string(3));
  EXPECT_EQ(s, (std::vector<std::string>{"x0^2", "x0*x1", "x1^2", "x0*x2", "x1*x2", "x2^2"}));
}

TEST(Poly, ParseAndPrint) {
  EXPECT_EQ(P("x1*x2 + x0^2", 3).to_string(), "x0^2 + x1*x2");
  EXPECT_EQ(P("-1/2 x0 + 3", 3).to_string(), "-1/2*x0 + 3");
  EXPECT_EQ(P("x0 - x0", 2).to_string(), "0");
  EXPECT_EQ(P("2x0x1^3", 2), P("2*x0*x1*x1*x1", 2));
  EXPECT_THROW(P("x5", 3), ParseError);
  EXPECT_THROW(P("x0 +", 3), ParseError);
  EXPECT_THROW(P("", 3), ParseError);
  try {
    parse_poly<Q>("x0 + y", 2, 4, 10);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 16);
  }
  auto f = P("x0^2 + x1x2", 3);
  EXPECT_TRUE(f.is_homogeneous());
  EXPECT_FALSE(P("x0^2 + x1", 3).is_homogeneous());
  EXPECT_EQ(f.degree(), 2);
}

TEST(MultMap, Examples) {
  auto m = mult_map(P("x0", 2), 1);
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m.rank(), 2);
  auto z = mult_map(PQ(3), 2, 1);
  EXPECT_TRUE(z.is_zero());
  auto q = mult_map(P("x0^2 + x1x2", 3), 1);
  EXPECT_EQ(q.rows(), 10);
  EXPECT_EQ(q.cols(), 3);
  EXPECT_EQ(oracle::rank(oracle::to_mpq(q)), 3);
  EXPECT_THROW(mult_map(P("x0^2 + x1", 3), 1), PreconditionError);
}

TEST(MultMap, Composition) {
  auto f = P("x0 - 2x1 + x2", 3), g = P("x0x2 + 3x1^2", 3);
  for (int d = 0; d <= 3; ++d) EXPECT_EQ(mult_map(f * g, d), mult_map(f, d + 2) * mult_map(g, d));
}

TEST(ChangeCoordinates, RoundTripAndHomomorphism) {
  auto x0 = P("x0", 3);
  EXPECT_EQ(change_coordinates(x0, DenseMatrix<Q>::identity(3)), x0);
  DenseMatrix<Q> swap{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
  EXPECT_EQ(change_coordinates(x0, swap), P("x1", 3));
  Rng rng(9);
  auto t = random_invertible<Q>(rng, 3);
  auto g = P("x0^2 + x1^2", 3);
  auto gp = change_coordinates(g, t);
  EXPECT_TRUE(gp.is_homogeneous());
  EXPECT_EQ(gp.degree(), 2);
  EXPECT_EQ(change_coordinates(gp, t.inverse()), g);
  auto h = P("x0x1 - x2^2 + 5x1^2", 3);
  EXPECT_EQ(change_coordinates(g + h, t), change_coordinates(g, t) + change_coordinates(h, t));
  EXPECT_EQ(change_coordinates(g * h, t), change_coordinates(g, t) * change_coordinates(h, t));
  DenseMatrix<Q> sing{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  EXPECT_THROW(change_coordinates(g, sing), PreconditionError);
}

TEST(Poly, EvaluateSubstituteDehomogenize) {
  auto f = P("x0^2 - x1x2 + 3x2^2", 3);
  EXPECT_EQ(f.evaluate({Q(1), Q(2), Q(1)}), Q(2));
  auto a = f.dehomogenize(2);
  EXPECT_EQ(a.to_string(), "x0^2 - x1 + 3");
}
