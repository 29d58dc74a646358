#include "support.hpp"

#include "pathcov/wright.hpp"

namespace pathcov {
namespace {

using test::q;

TEST(Wright, FigureTwoChildProductOfCoefficients) {
  const Rational a = q("3/2"), b = q("-2/5"), c = q("7/3");
  auto d = test::mediator(true, a, b, c);
  test::set_noise(d, "X", q("5/4"));
  EXPECT_EQ(trace_covariance(d, d.index("X"), d.index("Y")), q("5/4") * a * b);
  EXPECT_EQ(trace_covariance(d, d.index("X"), d.index("W")), q("5/4") * a * c);
}

TEST(Wright, UnitFigureTwoChild) {
  const auto d = test::mediator(true, 1, 1, 1);
  EXPECT_EQ(trace_covariance(d, d.index("X"), d.index("W")), Rational(1));
  EXPECT_EQ(trace_covariance(d, d.index("X"), d.index("W")), implied_covariance(d)(d.index("X"), d.index("W")));
}

TEST(Wright, DisconnectedIsZero) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 2");
  EXPECT_EQ(trace_covariance(d, 0, 1), Rational(0));
}

TEST(Wright, ColliderPathContributesNothing) {
  const auto d = test::load("collider_min.sem");
  const auto dec = trace_decomposition(d, implied_covariance(d), d.index("X"), d.index("Y"));
  EXPECT_TRUE(dec.paths.empty());
  EXPECT_EQ(dec.total, Rational(0));
}

TEST(Wright, RootUsesTotalVariance) {
  // the root Z of Y <- Z -> W has a parent off the path
  auto d = test::mediator(true, 2, 1, 3);
  const auto s = implied_covariance(d);
  const auto dec = trace_decomposition(d, s, d.index("Y"), d.index("W"));
  ASSERT_EQ(dec.paths.size(), 1u);
  EXPECT_EQ(dec.paths[0].root, d.index("Z"));
  EXPECT_EQ(dec.paths[0].root_variance, Rational(5));
  EXPECT_EQ(dec.total, Rational(15));
  EXPECT_EQ(dec.total, s(d.index("Y"), d.index("W")));
}

TEST(Wright, BidirectedPathIsRootless) {
  const auto d = test::load("fig4.sem");
  const auto s = implied_covariance(d);
  const auto dec = trace_decomposition(d, s, d.index("C"), d.index("C'"));
  ASSERT_EQ(dec.paths.size(), 1u);
  EXPECT_FALSE(dec.paths[0].root.has_value());
  EXPECT_EQ(dec.paths[0].root_variance, Rational(1));
  EXPECT_EQ(dec.total, q("1/3"));
  EXPECT_EQ(dec.total, s(d.index("C"), d.index("C'")));
}

TEST(Wright, DiagonalIsTotalVariance) {
  const auto d = test::load("fig4.sem");
  const auto s = implied_covariance(d);
  for (NodeIndex v = 0; v < d.size(); ++v) EXPECT_EQ(trace_covariance(d, s, v, v), s(v, v));
}

TEST(Wright, AgreesWithImpliedCovarianceOnFigureFour) {
  const auto d = test::load("fig4.sem");
  const auto s = implied_covariance(d);
  for (NodeIndex i = 0; i < d.size(); ++i) {
    for (NodeIndex j = 0; j < d.size(); ++j) EXPECT_EQ(trace_covariance(d, s, i, j), s(i, j));
  }
}

}  // namespace
}  // namespace pathcov
