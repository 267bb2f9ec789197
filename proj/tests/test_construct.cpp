#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailsheaf/classify.hpp"
#include "tailsheaf/construct.hpp"

using namespace tailsheaf;
using Q = Rational;
using PQ = Poly<Q>;

namespace {

std::vector<PQ> poonen_ideal() {
  std::vector<PQ> out;
  for (auto s : {"x0^2 + x2^3", "x0x1", "x1^2 + x2^3", "x0x2", "x1x2", "x2^4"}) out.push_back(parse_poly<Q>(s, 3));
  return out;
}

std::vector<std::string> point_strings(const ZeroLocus& z) {
  std::vector<std::string> out;
  for (const auto& p : z.points) out.push_back(p.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Construct, BasicShapes) {
  auto s = s1<Q>(4);
  EXPECT_EQ(s.rows(), 1);
  EXPECT_EQ(s.cols(), 4);
  auto t = euler_tangent<Q>(4);
  EXPECT_EQ(t.cols(), 5);
  EXPECT_EQ(t.rank(), 4);
  EXPECT_THROW(s1<Q>(1), PreconditionError);
  EXPECT_EQ(fixture<Q>("euler_tangent(4)"), t);
  EXPECT_THROW(fixture<Q>("nonsense"), PreconditionError);
}

TEST(Construct, PointsBlockPutsSingularitiesWhereAsked) {
  std::vector<std::vector<Q>> pts{{Q(1), Q(2), Q(3), Q(1)}, {Q(0), Q(1), Q(0), Q(0)}, {Q(-1), Q(0), Q(5), Q(2)}};
  auto p = points_block<Q>(3, pts);
  EXPECT_EQ(p.rows(), 3);
  EXPECT_EQ(p.cols(), 9);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto at = p.evaluate(pts[i]);
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(at(static_cast<int>(i), static_cast<int>(i) * 3 + j).is_zero());
    EXPECT_EQ(at.rank(), 2);
  }
  auto c = classify_tail(p);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 3);
  EXPECT_TRUE(c.minimal);
  auto r = singular_locus(p);
  EXPECT_EQ(point_strings(r.locus), (std::vector<std::string>{"(-1/2:0:5/2:1)", "(0:1:0:0)", "(1:2:3:1)"}));
}

TEST(Construct, PointFormsAreChecked) {
  PointForms<Q> bad{{Q(0), Q(0), Q(0), Q(1)}, {parse_poly<Q>("x0", 4), parse_poly<Q>("x1", 4), parse_poly<Q>("x3", 4)}};
  EXPECT_THROW(check_point_forms(bad, 3), PreconditionError);
  PointForms<Q> dep{{Q(0), Q(0), Q(0), Q(1)}, {parse_poly<Q>("x0", 4), parse_poly<Q>("x1", 4), parse_poly<Q>("x0 + x1", 4)}};
  EXPECT_THROW(check_point_forms(dep, 3), PreconditionError);
  EXPECT_THROW(forms_through<Q>({Q(0), Q(0), Q(0), Q(0)}), PreconditionError);
}

TEST(Construct, CurvilinearIsAMinimalTailAtOnePoint) {
  for (int m = 1; m <= 4; ++m) {
    auto p = curvilinear<Q>(3, m);
    auto c = classify_tail(p);
    EXPECT_TRUE(c.is_tail) << m;
    EXPECT_EQ(c.m, m);
    EXPECT_TRUE(c.minimal);
    auto r = singular_locus(p);
    ASSERT_EQ(r.locus.points.size(), 1u);
    EXPECT_EQ(r.locus.points[0].to_string(), "(0:0:0:1)");
    EXPECT_EQ(r.ext_length, m);
    // h^2 = m below -4, oracle side
    EXPECT_EQ(oracle::cohomology_row(p, -5)[2], m);
  }
}

TEST(Construct, LocalAlgebraOfTheSixPointIdeal) {
  auto alg = local_algebra(3, poonen_ideal());
  ASSERT_EQ(alg.length(), 6);
  EXPECT_TRUE(is_cyclic(alg.matrices));
  auto p = from_local_algebra(alg);
  EXPECT_EQ(p.rows(), 6);
  EXPECT_EQ(p.cols(), 18);
  auto c = classify_tail(p);
  EXPECT_TRUE(c.is_tail);
  EXPECT_EQ(c.m, 6);
  EXPECT_TRUE(c.minimal);
  auto r = singular_locus(p);
  ASSERT_EQ(r.locus.points.size(), 1u);
  EXPECT_EQ(r.locus.points[0].to_string(), "(0:0:0:1)");
  EXPECT_EQ(r.locus.length, 6);
  EXPECT_EQ(r.ext_length, 6);
  // same invariants as the displayed 6 x 18 matrix
  auto f = fixture<Q>("poonen_6x18");
  EXPECT_EQ(cohomology_table(p, -10, 3), cohomology_table(f, -10, 3));
  EXPECT_EQ(fitting_ideal(p), fitting_ideal(f));
}

TEST(Construct, LocalAlgebraMovedToAnotherPoint) {
  auto alg = local_algebra(3, poonen_ideal());
  auto p = from_local_algebra(alg, {Q(1), Q(-1), Q(2), Q(1)});
  auto r = singular_locus(p);
  ASSERT_EQ(r.locus.points.size(), 1u);
  EXPECT_EQ(r.locus.points[0].to_string(), "(1:-1:2:1)");
  EXPECT_EQ(r.ext_length, 6);
  EXPECT_EQ(cohomology_table(p, -8, 2), cohomology_table(fixture<Q>("poonen_6x18"), -8, 2));
}

TEST(Construct, CyclicityAndNilpotency) {
  DenseMatrix<Q> z(2, 2);
  EXPECT_FALSE(is_cyclic<Q>({z, z}));
  DenseMatrix<Q> shift(2, 2);
  shift(1, 0) = Q(1);
  EXPECT_TRUE(is_cyclic<Q>({shift, z}));
  DenseMatrix<Q> id = DenseMatrix<Q>::identity(2);
  EXPECT_THROW(from_local_algebra(FatPointSpec<Q>{{}, {id, z}}), Error);
  DenseMatrix<Q> other(2, 2);
  other(0, 1) = Q(1);
  EXPECT_THROW(from_local_algebra(FatPointSpec<Q>{{}, {shift, other}}), Error);
}

TEST(Construct, CoordinatesSendingToLast) {
  std::vector<Q> p{Q(2), Q(0), Q(-3), Q(0)};
  auto a = coordinates_sending_to_last(p);
  std::vector<Q> e3{Q(0), Q(0), Q(0), Q(1)};
  EXPECT_EQ(a.apply(p), e3);
  EXPECT_THROW(coordinates_sending_to_last<Q>({Q(0), Q(0), Q(0), Q(0)}), PreconditionError);
}

TEST(Construct, ChainExtensionReproducesTheRemarkMatrix) {
  ChainSpec<Q> spec;
  spec.n = 3;
  auto x = [](int i) { return PQ::variable(4, i); };
  spec.diagonal = {{x(0), x(1), x(2)}, {x(0), x(1), x(2)}};
  spec.lower[{1, 0}] = {x(3), PQ(4), PQ(4)};
  EXPECT_EQ(chain_extension(spec), fixture<Q>("remark_iv"));
  spec.lower[{0, 1}] = {x(3), PQ(4), PQ(4)};
  EXPECT_THROW(chain_extension(spec), PreconditionError);
  spec.lower.erase({0, 1});
  spec.diagonal[1] = {x(0), x(1), x(0) + x(1)};
  EXPECT_THROW(chain_extension(spec), PreconditionError);
}

TEST(Construct, ExampleBHasTheAdvertisedPoints) {
  auto p = fixture<Q>("example_b_points");
  EXPECT_TRUE(p.evaluate({Q(1), Q(1), Q(1), Q(1)}).rank() < 2);
  EXPECT_TRUE(p.evaluate({Q(0), Q(0), Q(0), Q(1)}).rank() < 2);
  EXPECT_EQ(p.evaluate({Q(1), Q(2), Q(3), Q(4)}).rank(), 2);
}
