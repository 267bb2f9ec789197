#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailsheaf/classify.hpp"
#include "tailsheaf/construct.hpp"
#include "tailsheaf/structure.hpp"

using namespace tailsheaf;
using Q = Rational;
using PQ = Poly<Q>;

namespace {

using Point = std::vector<Q>;

Point normalized(Point p) {
  int last = static_cast<int>(p.size()) - 1;
  while (p[last].is_zero()) --last;
  Q s = p[last];
  for (auto& c : p) c = c / s;
  return p;
}

// where a point of the original matrix lands after M'(x) = R M(T x) C
Point pulled_back(const TransformationRecord<Q>& rec, const Point& p) { return normalized(rec.coords.inverse().apply(p)); }

bool same_sheaf_invariants(const SheafPresentation<Q>& a, const SheafPresentation<Q>& b) {
  return cohomology_table(a, -8, 2) == cohomology_table(b, -8, 2) && fitting_ideal(a) == fitting_ideal(b);
}

std::vector<Point> block_points(const BlockDecomposition& d) {
  std::vector<Point> out;
  for (const auto& b : d.blocks) out.push_back(b.point);
  return out;
}

bool contains(const std::vector<Point>& v, const Point& p) { return std::find(v.begin(), v.end(), p) != v.end(); }

}  // namespace

TEST(Peel, RemarkMatrixLeavesS1) {
  auto p = fixture<Q>("remark_iv");
  auto r = peel(p);
  EXPECT_EQ(r.point, (Point{Q(0), Q(0), Q(0), Q(1)}));
  EXPECT_EQ(apply(r.record, p), r.transformed);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(r.transformed(0, j), j < 3 ? PQ::variable(4, j) : PQ(4));
  EXPECT_EQ(r.quotient, s1<Q>(3));
  // the transformed matrix is the same sheaf
  EXPECT_TRUE(same_sheaf_invariants(p, r.transformed));
}

TEST(Peel, ScrambledInputStillPeels) {
  auto base = fixture<Q>("example_b_points");
  auto [p, rec] = scramble(base, 5);
  auto r = peel(p);
  EXPECT_TRUE(r.point == pulled_back(rec, {Q(0), Q(0), Q(0), Q(1)}) || r.point == pulled_back(rec, {Q(1), Q(1), Q(1), Q(1)}));
  EXPECT_EQ(apply(r.record, p), r.transformed);
  auto c = classify_tail(r.quotient);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 1);
  EXPECT_TRUE(c.minimal);
}

TEST(Peel, IteratedPeelOfCurvilinear) {
  auto p = curvilinear<Q>(3, 4);
  for (int m = 4; m >= 1; --m) {
    auto r = peel(p);
    EXPECT_EQ(r.point, (Point{Q(0), Q(0), Q(0), Q(1)}));
    p = r.quotient;
    if (m > 1) {
      EXPECT_EQ(classify_tail(p).m, m - 1);
    }
  }
}

TEST(Peel, RejectsNonMinimal) {
  EXPECT_THROW(peel(fixture<Q>("example_d")), PreconditionError);
  EXPECT_THROW(peel(fixture<Q>("counterexample_3x9")), PreconditionError);
}

TEST(ChainForm, LowerTriangularWithPoints) {
  auto [p, rec0] = scramble(curvilinear<Q>(3, 3), 3);
  auto ch = chain_form(p);
  EXPECT_EQ(apply(ch.record, p), ch.presentation);
  auto target = pulled_back(rec0, {Q(0), Q(0), Q(0), Q(1)});
  ASSERT_EQ(ch.points.size(), 3u);
  for (const auto& q : ch.points) EXPECT_EQ(normalized(ch.record.coords.apply(q)), target);
  for (int i = 0; i < 3; ++i)
    for (int j = 3 * (i + 1); j < 9; ++j) EXPECT_TRUE(ch.presentation(i, j).is_zero());
  // coordinates moved, so only the cohomology is comparable
  EXPECT_EQ(cohomology_table(p, -8, 2), cohomology_table(ch.presentation, -8, 2));
}

TEST(ChainForm, SixByEighteen) {
  auto p = fixture<Q>("poonen_6x18");
  auto ch = chain_form(p);
  EXPECT_EQ(apply(ch.record, p), ch.presentation);
  for (const auto& q : ch.points) EXPECT_EQ(normalized(ch.record.coords.apply(q)), (Point{Q(0), Q(0), Q(0), Q(1)}));
}

TEST(Decompose, TwoPoints) {
  auto d = decompose(fixture<Q>("example_b_points"));
  ASSERT_EQ(d.blocks.size(), 2u);
  auto pts = block_points(d);
  EXPECT_TRUE(contains(pts, {Q(0), Q(0), Q(0), Q(1)}));
  EXPECT_TRUE(contains(pts, {Q(1), Q(1), Q(1), Q(1)}));
  for (const auto& b : d.blocks) EXPECT_EQ(b.m, 1);
}

TEST(Decompose, SinglePointStaysWhole) {
  for (const char* name : {"remark_iv", "poonen_6x18"}) {
    auto p = fixture<Q>(name);
    auto d = decompose(p);
    ASSERT_EQ(d.blocks.size(), 1u) << name;
    EXPECT_EQ(d.blocks[0].m, p.rows());
  }
}

TEST(Decompose, ScrambledPointsSeparate) {
  std::vector<Point> pts{{Q(1), Q(0), Q(2), Q(1)}, {Q(0), Q(1), Q(0), Q(0)}, {Q(3), Q(-1), Q(1), Q(1)}};
  auto base = direct_sum(points_block<Q>(3, pts), curvilinear<Q>(3, 2)).sum;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto [p, rec] = scramble(base, seed);
    auto d = decompose(p, seed);
    EXPECT_EQ(apply(d.record, p), d.transformed);
    auto got = block_points(d);
    for (const auto& q : pts) EXPECT_TRUE(contains(got, pulled_back(rec, q))) << seed;
    EXPECT_TRUE(contains(got, pulled_back(rec, {Q(0), Q(0), Q(0), Q(1)}))) << seed;
    int total = 0;
    for (const auto& b : d.blocks) {
      total += b.m;
      auto c = classify_tail(b.presentation);
      EXPECT_TRUE(c.is_tail);
      EXPECT_EQ(c.m, b.m);
      EXPECT_TRUE(c.minimal);
      auto at = b.presentation.evaluate(b.point);
      EXPECT_LT(at.rank(), b.m);
    }
    EXPECT_EQ(total, 5);
    EXPECT_EQ(d.blocks.size(), 4u);
  }
}

TEST(Decompose, SubBlockOfExampleD) {
  auto d = fixture<Q>("example_d");
  std::vector<int> cols;
  for (int j = 17; j < 26; ++j) cols.push_back(j);
  auto m3 = twist(sub_presentation(d, {5, 6, 7}, cols), -3);
  auto dec = decompose(m3);
  EXPECT_EQ(dec.blocks.size(), 3u);
}

TEST(TangentPower, RecognizesTheMiddleBlockOfExampleD) {
  auto d = fixture<Q>("example_d");
  std::vector<int> cols;
  for (int j = 9; j < 17; ++j) cols.push_back(j);
  auto m2 = sub_presentation(d, {3, 4}, cols);
  auto t = recognize_tangent_power(m2);
  ASSERT_TRUE(t.success) << t.reason;
  EXPECT_EQ(t.m, 2);
  EXPECT_EQ(t.twist, 2);
  EXPECT_EQ(apply(t.record, m2), twist(direct_sum(euler_tangent<Q>(3), euler_tangent<Q>(3)).sum, 2));
}

TEST(TangentPower, ScrambledSumsAndFailures) {
  auto base = direct_sum(direct_sum(euler_tangent<Q>(3), euler_tangent<Q>(3)).sum, euler_tangent<Q>(3)).sum;
  auto [p, rec] = scramble(base, 9);
  auto t = recognize_tangent_power(p);
  ASSERT_TRUE(t.success);
  EXPECT_EQ(t.m, 3);
  EXPECT_FALSE(recognize_tangent_power(fixture<Q>("remark_iv")).success);
  // 8 columns for 2 rows, but columns 0 and 4 coincide
  auto x = [](int i) { return PQ::variable(4, i); };
  PQ o(4);
  auto dup = SheafPresentation<Q>(3, {0, 0}, std::vector<int>(8, 1),
                                  {{x(0), x(1), x(2), x(3), x(0), o, o, o}, {x(1), o, o, o, x(1), x(1), x(2), x(3)}});
  auto r = recognize_tangent_power(dup);
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.reason.empty());
  EXPECT_THROW(recognize_tangent_power(fixture<Q>("example_d")), PreconditionError);
}

TEST(SplitLevel, RecoversLineBundles) {
  auto base = direct_sum(curvilinear<Q>(3, 2), line_bundles<Q>(3, {1, 3})).sum;
  auto p = scramble_columns(base, 4);
  ASSERT_NE(p, base);
  auto s = split_level(p);
  EXPECT_EQ(s.m, 2);
  auto sum = s.summands;
  std::sort(sum.begin(), sum.end());
  EXPECT_EQ(sum, (std::vector<int>{1, 3}));
  EXPECT_TRUE(s.verified) << s.diagnostics;
  EXPECT_TRUE(classify_tail(s.minimal_part).minimal);
  // oracle side: h^i of the pieces add up
  for (int t = -6; t <= 1; ++t) {
    auto whole = oracle::cohomology_row(p, t);
    auto part = oracle::cohomology_row(s.minimal_part, t);
    auto lb = oracle::cohomology_row(line_bundles<Q>(3, s.summands), t);
    for (int i = 0; i <= 3; ++i) EXPECT_EQ(whole[i], part[i] + lb[i]) << t;
  }
}

TEST(SplitLevel, TwistedInput) {
  auto base = twist(direct_sum(fixture<Q>("remark_iv"), line_bundles<Q>(3, {2})).sum, 3);
  auto s = split_level(base);
  EXPECT_EQ(s.shift, -3);
  EXPECT_EQ(s.summands, (std::vector<int>{5}));
  EXPECT_TRUE(s.verified);
  EXPECT_THROW(split_level(fixture<Q>("example_c")), PreconditionError);
}

TEST(ExtensionBlocks, CounterexampleSplits) {
  auto p = fixture<Q>("counterexample_3x9");
  auto e = extension_blocks(p, 0);
  EXPECT_EQ(e.l, 1);
  auto h = classify_tail(e.h);
  EXPECT_TRUE(h.is_tail);
  EXPECT_TRUE(h.minimal);
  EXPECT_FALSE(classify_tail(e.g).is_tail);
  EXPECT_THROW(extension_blocks(p, 1), PreconditionError);
  EXPECT_THROW(extension_blocks(p, -1), PreconditionError);
}

TEST(ExtensionBlocks, LeadingRows) {
  EXPECT_EQ(leading_diagonal_rows(curvilinear<Q>(3, 3)), 1);
  EXPECT_EQ(leading_diagonal_rows(points_block<Q>(3, std::vector<Point>{{Q(0), Q(0), Q(0), Q(1)}, {Q(0), Q(0), Q(0), Q(1)}})), 2);
  auto e = extension_blocks(curvilinear<Q>(3, 3), 0);
  EXPECT_EQ(e.h.rows(), 2);
  EXPECT_EQ(e.g.rows(), 3);
}

TEST(Scramble, KeepsInvariants) {
  auto p = fixture<Q>("example_b_points");
  auto [q, rec] = scramble(p, 17);
  EXPECT_EQ(cohomology_table(p, -7, 1), cohomology_table(q, -7, 1));
  auto sc = scramble_columns(fixture<Q>("example_c"), 2);
  EXPECT_EQ(cohomology_table(sc, -7, 1), cohomology_table(fixture<Q>("example_c"), -7, 1));
  EXPECT_EQ(fitting_ideal(sc), fitting_ideal(fixture<Q>("example_c")));
}
