#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailsheaf/classify.hpp"
#include "tailsheaf/construct.hpp"

using namespace tailsheaf;
using Q = Rational;

namespace {

// HF_E(d) = h^{n-1}(F(-d-n-1)), computed by the oracle.
void expect_series_matches_oracle(const SheafPresentation<Q>& p, int dlo, int dhi) {
  auto c = classify_tail(p);
  int n = p.n();
  for (int d = dlo; d <= dhi; ++d) EXPECT_EQ(c.hs(d), oracle::cohomology_row(p, -d - n - 1)[n - 1]) << "d=" << d;
}

SheafPresentation<Q> level_example() {
  auto sum = direct_sum(curvilinear<Q>(3, 2), line_bundles<Q>(3, {1, 3})).sum;
  return sum;
}

}  // namespace

TEST(Classify, S1IsANormalizedMinimalOneTail) {
  auto c = classify_tail(s1<Q>(3));
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 1);
  EXPECT_EQ(c.k, -4);
  EXPECT_TRUE(c.normalized);
  EXPECT_TRUE(c.minimal);
  EXPECT_TRUE(c.level);
  expect_series_matches_oracle(s1<Q>(3), -3, 6);
}

TEST(Classify, RemarkMatrixIsAMinimalTwoTail) {
  auto p = fixture<Q>("remark_iv");
  auto c = classify_tail(p);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 2);
  EXPECT_EQ(c.k, -4);
  EXPECT_TRUE(c.minimal);
  expect_series_matches_oracle(p, -3, 6);
}

TEST(Classify, CounterexampleIsNotATail) {
  auto p = fixture<Q>("counterexample_3x9");
  auto c = classify_tail(p);
  EXPECT_FALSE(c.is_tail);
  // h^2(F(-5)) = 3 and h^2(F(t)) = 2 below: unstable at the top, so not a tail
  ASSERT_EQ(c.witness.size(), 2u);
  EXPECT_EQ(c.witness[0], (std::pair<int, long long>{-5, 3}));
  EXPECT_EQ(c.witness[1], (std::pair<int, long long>{-6, 2}));
  EXPECT_EQ(oracle::cohomology_row(p, -4)[2], 3);
  EXPECT_EQ(oracle::cohomology_row(p, -5)[2], 3);
  EXPECT_EQ(oracle::cohomology_row(p, -6)[2], 2);
  EXPECT_EQ(oracle::cohomology_row(p, -9)[2], 2);
  EXPECT_EQ(c.hs.numerator(), (std::vector<long long>{3, -9, 8, 0, -3, 1}));
  expect_series_matches_oracle(p, -3, 8);
  EXPECT_THROW(is_minimal(p), PreconditionError);
  EXPECT_THROW(normalize(p), PreconditionError);
}

TEST(Classify, FixtureVerdicts) {
  struct Want {
    const char* name;
    bool tail;
    long long m;
    int k;
    bool minimal;
  };
  for (auto w : {Want{"example_b_points", true, 2, -4, true}, Want{"example_c", true, 2, -4, false},
                 Want{"example_d", true, 3, -4, false}, Want{"poonen_6x18", true, 6, -4, true}, Want{"chern_16", false, 0, 0, false},
                 Want{"euler_tangent(3)", false, 0, 0, false}}) {
    auto c = classify_tail(fixture<Q>(w.name));
    EXPECT_EQ(c.is_tail, w.tail) << w.name;
    if (!w.tail) continue;
    EXPECT_EQ(c.m, w.m) << w.name;
    EXPECT_EQ(c.k, w.k) << w.name;
    EXPECT_EQ(c.minimal, w.minimal) << w.name;
  }
}

TEST(Classify, TwistShiftsTheStartingDegree) {
  auto p = fixture<Q>("remark_iv");
  for (int t : {-3, -1, 2, 5}) {
    auto c = classify_tail(twist(p, t));
    EXPECT_TRUE(c.is_tail);
    EXPECT_EQ(c.m, 2);
    EXPECT_EQ(c.k, -4 - t);
    EXPECT_EQ(c.normalized, t == 0);
    EXPECT_TRUE(c.minimal);
    auto [np, shift] = normalize(twist(p, t));
    EXPECT_EQ(shift, -t);
    EXPECT_EQ(np, p);
  }
}

TEST(Classify, DirectSumAddsMultiplicities) {
  auto p = direct_sum(fixture<Q>("remark_iv"), s1<Q>(3)).sum;
  auto c = classify_tail(p);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 3);
  EXPECT_TRUE(c.minimal);
  auto q = direct_sum(fixture<Q>("poonen_6x18"), fixture<Q>("example_b_points")).sum;
  EXPECT_EQ(classify_tail(q).m, 8);
  // different starting degrees do not give a tail
  auto r = direct_sum(s1<Q>(3), twist(s1<Q>(3), 1)).sum;
  EXPECT_FALSE(classify_tail(r).is_tail);
}

TEST(Classify, LevelButNotMinimal) {
  auto p = level_example();
  auto c = classify_tail(p);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 2);
  EXPECT_TRUE(c.level);
  EXPECT_FALSE(c.minimal);
  EXPECT_TRUE(is_level(p));
  EXPECT_FALSE(is_level(fixture<Q>("example_c")));
}

TEST(Classify, RankBound) {
  for (const char* name : {"remark_iv", "poonen_6x18", "example_b_points"}) {
    auto b = rank_bound_check(fixture<Q>(name));
    EXPECT_TRUE(b.holds) << name;
    EXPECT_TRUE(b.tight) << name;
  }
  auto d = rank_bound_check(fixture<Q>("example_d"));
  EXPECT_EQ(d.rank, 18);
  EXPECT_EQ(d.bound, 6);
  EXPECT_TRUE(d.holds);
  EXPECT_FALSE(d.tight);
  EXPECT_FALSE(rank_bound_check(s1<Q>(3), 5).holds);
}

TEST(SingularLocus, S1) {
  auto r = singular_locus(s1<Q>(3));
  ASSERT_EQ(r.locus.points.size(), 1u);
  EXPECT_EQ(r.locus.points[0].to_string(), "(0:0:0:1)");
  EXPECT_EQ(r.ext_length, 1);
  EXPECT_EQ(r.ext_dimension, 0);
  EXPECT_TRUE(r.codim_at_least_3);
  EXPECT_TRUE(r.reflexive_assumed);
}

TEST(SingularLocus, TwoReducedPoints) {
  auto r = singular_locus(fixture<Q>("example_b_points"));
  ASSERT_EQ(r.locus.points.size(), 2u);
  std::vector<std::string> pts{r.locus.points[0].to_string(), r.locus.points[1].to_string()};
  std::sort(pts.begin(), pts.end());
  EXPECT_EQ(pts, (std::vector<std::string>{"(0:0:0:1)", "(1:1:1:1)"}));
  EXPECT_EQ(r.locus.length, 2);
  EXPECT_EQ(r.ext_length, 2);
}

TEST(SingularLocus, SixteenPoints) {
  auto p = fixture<Q>("chern_16");
  auto r = singular_locus(p);
  EXPECT_EQ(r.locus.points.size(), 16u);
  EXPECT_EQ(r.locus.length, 16);
  EXPECT_EQ(r.ext_length, 16);
  EXPECT_TRUE(r.reflexive_assumed);
  // independent: every (i:j:0:1) kills the whole column
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) EXPECT_TRUE(p.evaluate({Q(i), Q(j), Q(0), Q(1)}).is_zero());
}

TEST(SingularLocus, FatPointLengthExceedsMultiplicity) {
  auto r = singular_locus(fixture<Q>("example_d"));
  ASSERT_EQ(r.locus.points.size(), 1u);
  EXPECT_EQ(r.locus.length, 10);
  EXPECT_EQ(r.ext_length, 3);
}

TEST(SingularLocus, TangentBundleIsSmooth) {
  auto r = singular_locus(euler_tangent<Q>(3));
  EXPECT_EQ(r.locus.kind, LocusKind::Empty);
  EXPECT_TRUE(r.codim_at_least_3);
}
