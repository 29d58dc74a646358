#include "support.hpp"

#include "pathcov/factorization.hpp"

namespace pathcov {
namespace {

using test::q;

Path only_path(const Graph& g, std::string_view x, std::string_view y) {
  const auto ps = enumerate_paths(g, g.index(x), g.index(y));
  EXPECT_EQ(ps.size(), 1u);
  return ps.front();
}

Certificate<Rational> fac(const PathDiagram<Rational>& d, std::string_view x, std::string_view y,
                          std::initializer_list<std::string_view> z) {
  return factorize(d, implied_covariance(d), d.index(x), d.index(y), test::nodes(d, z));
}

Rational eval(const PathDiagram<Rational>& d, const Certificate<Rational>& c) {
  return evaluate_certificate(c, implied_covariance(d));
}

TEST(PathOrder, RootAndBidirectedForms) {
  const auto d2 = test::mediator(true, 1, 1, 1);
  const auto [f1, o1] = path_order(only_path(d2.graph(), "X", "Y"));
  EXPECT_EQ(f1, PathForm::root);
  EXPECT_EQ(o1, (std::vector<NodeIndex>{d2.index("X"), d2.index("Z"), d2.index("Y")}));

  const auto d4 = test::load("fig4.sem");
  const auto [f2, o2] = path_order(only_path(d4.graph(), "C", "C'"));
  EXPECT_EQ(f2, PathForm::bidirected);
  EXPECT_EQ(o2.front(), d4.index("C"));
}

TEST(Classify, FigureTwoChildGoesBelowZ) {
  const auto d = test::mediator(true, 1, 1, 1);
  const Graph& g = d.graph();
  const auto part = classify_conditioners(g, only_path(g, "X", "Y"), test::nodes(d, {"W"}));
  ASSERT_EQ(part.order.size(), 3u);
  EXPECT_EQ(part.order[1], d.index("Z"));
  EXPECT_EQ(part.lower[1], test::nodes(d, {"W"}));
  EXPECT_TRUE(part.upper[1].empty());
}

TEST(Classify, FigureTwoParentGoesAboveZ) {
  const auto d = test::mediator(false, 1, 1, 1);
  const Graph& g = d.graph();
  const auto part = classify_conditioners(g, only_path(g, "X", "Y"), test::nodes(d, {"W"}));
  EXPECT_EQ(part.upper[1], test::nodes(d, {"W"}));
  EXPECT_TRUE(part.lower[1].empty());
}

TEST(Classify, FigureTwoForkGoesBelowX) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 1\nnode Z noise 1\nedge X -> Y coef 2\nedge X -> Z coef 1");
  const Graph& g = d.graph();
  const auto part = classify_conditioners(g, only_path(g, "X", "Y"), test::nodes(d, {"Z"}));
  EXPECT_EQ(part.order[0], d.index("X"));
  EXPECT_EQ(part.lower[0], test::nodes(d, {"Z"}));
  EXPECT_TRUE(part.upper[1].empty() && part.lower[1].empty());
}

TEST(ColliderFree, FigureTwoChildFactors) {
  const auto d = test::mediator(true, 1, 1, 1);
  const auto c = fac(d, "X", "Y", {"W"});
  EXPECT_EQ(c.kind, CertificateKind::collider_free);
  EXPECT_EQ(c.base, Rational(1));
  ASSERT_EQ(c.factors.size(), 3u);
  const NodeSet w = test::nodes(d, {"W"});
  EXPECT_TRUE(c.factors[0].unit());
  EXPECT_EQ(c.factors[1].node, d.index("Z"));
  EXPECT_EQ(c.factors[1].num, w);
  EXPECT_TRUE(c.factors[1].den.empty());
  EXPECT_EQ(c.factors[2].num, w);
  EXPECT_EQ(c.factors[2].den, w);
  EXPECT_TRUE(c.factors[2].unit());
  EXPECT_EQ(eval(d, c), q("1/3"));
}

TEST(ColliderFree, FigureOneConditionedOnEnd) {
  const auto d = test::load("fig1.sem");
  const auto c = fac(d, "X", "Y", {"Z"});
  EXPECT_EQ(eval(d, c), q("1/3"));
}

TEST(ColliderFree, EmptyConditioningIsBase) {
  const auto dd = test::mediator(true, q("2/3"), -3, q("1/5"));
  const auto c = fac(dd, "X", "Y", {});
  for (const auto& f : c.factors) EXPECT_TRUE(f.unit());
  EXPECT_EQ(eval(dd, c), c.base);
  EXPECT_EQ(c.base, q("2/3") * Rational(-3));
}

TEST(ColliderFree, ClosedPathIsZero) {
  const auto d = test::load("fig1.sem");
  const auto c = fac(d, "X", "Z", {"Y"});
  EXPECT_EQ(c.kind, CertificateKind::closed);
  EXPECT_EQ(eval(d, c), Rational(0));
}

TEST(ColliderFree, OtherComponentsAreDropped) {
  auto d = parse_diagram("node X noise 1\nnode Y noise 1\nnode Q noise 1\nedge X -> Y coef 1");
  const auto c = fac(d, "X", "Y", {"Q"});
  EXPECT_FALSE(c.given.contains(d.index("Q")));
  EXPECT_FALSE(c.notes.empty());
  EXPECT_EQ(eval(d, c), Rational(1));
}

TEST(Simplify, IdenticalSetsAreUnit) {
  const auto d = test::mediator(true, 1, 1, 1);
  const NodeSet w = test::nodes(d, {"W"});
  EXPECT_TRUE(simplify_factor(d.graph(), RatioFactor{d.index("Y"), w, w}).unit());
}

TEST(Simplify, SeparatedConditionerDrops) {
  const auto d = test::load("fig1.sem");
  const RatioFactor f{d.index("Z"), test::nodes(d, {"X", "Y"}), test::nodes(d, {"Y"})};
  const auto s = simplify_factor(d.graph(), f);
  EXPECT_TRUE(s.unit());
  PartialCovOracle<Rational> o(implied_covariance(d));
  EXPECT_EQ(o.var(f.node, f.num) / o.var(f.node, f.den), Rational(1));
}

TEST(Openers, FigureFourAssignment) {
  const auto d = test::load("fig4.sem");
  const Graph& g = d.graph();
  const auto plan = assign_openers(g, only_path(g, "X", "Y"), test::nodes(d, {"C'", "U1", "L1", "W1", "W2"}));
  ASSERT_EQ(plan.colliders.size(), 2u);
  EXPECT_EQ(plan.colliders[0].collider, d.index("C"));
  EXPECT_EQ(plan.colliders[0].openers, (std::vector<NodeIndex>{d.index("W1"), d.index("W2")}));
  EXPECT_EQ(plan.colliders[1].collider, d.index("C'"));
  EXPECT_EQ(plan.colliders[1].openers, (std::vector<NodeIndex>{d.index("C'")}));
}

TEST(Openers, ConditionedColliderIsItsOwnOpener) {
  const auto d = parse_diagram("node X noise 1\nnode C noise 1\nnode Y noise 1\nedge X -> C coef 1\nedge Y -> C coef 1");
  const Graph& g = d.graph();
  const auto plan = assign_openers(g, only_path(g, "X", "Y"), test::nodes(d, {"C"}));
  ASSERT_EQ(plan.colliders.size(), 1u);
  EXPECT_EQ(plan.colliders[0].openers, std::vector<NodeIndex>{d.index("C")});
}

TEST(Openers, DescendantOpener) {
  const auto d = test::load("collider_min.sem");
  const Graph& g = d.graph();
  const auto plan = assign_openers(g, only_path(g, "X", "Y"), test::nodes(d, {"W"}));
  ASSERT_EQ(plan.colliders.size(), 1u);
  EXPECT_EQ(plan.colliders[0].openers, std::vector<NodeIndex>{d.index("W")});
  EXPECT_EQ(format_path(g, plan.colliders[0].chains[0]), "C -> W");
}

TEST(Colliders, MinimalDiagram) {
  const auto d = test::load("collider_min.sem");
  const auto c = fac(d, "X", "Y", {"W"});
  EXPECT_EQ(c.kind, CertificateKind::collider_sum);
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_EQ(c.terms[0].sign, -1);
  EXPECT_EQ(eval(d, c), q("-1/4"));
  EXPECT_EQ(test::pcov(d, "X", "Y", {"W"}), q("-1/4"));
}

TEST(Colliders, SingleConditionedCollider) {
  const auto d = test::load("collider_min.sem");
  const auto c = fac(d, "X", "Y", {"C"});
  ASSERT_EQ(c.terms.size(), 1u);
  const auto& t = c.terms[0];
  EXPECT_EQ(t.sign, -1);
  EXPECT_EQ(t.covariances.size(), 2u);
  ASSERT_EQ(t.variances.size(), 1u);
  EXPECT_EQ(t.variances[0].node, d.index("C"));
  EXPECT_EQ(eval(d, c), test::pcov(d, "X", "Y", {"C"}));
  EXPECT_EQ(eval(d, c), q("-1/3"));
}

TEST(Colliders, FigureFourTwoTermExpansion) {
  const auto d = test::load("fig4.sem");
  const auto c = fac(d, "X", "Y", {"C'", "U1", "L1", "W1", "W2"});
  ASSERT_EQ(c.terms.size(), 2u);
  for (const auto& t : c.terms) {
    EXPECT_EQ(t.sign, 1);
    EXPECT_EQ(t.covariances.size(), 3u);
    EXPECT_EQ(t.variances.size(), 2u);
    for (const auto& sub : t.covariances) EXPECT_EQ(sub.kind, CertificateKind::collider_free);
  }
  EXPECT_EQ(c.terms[0].openers.front(), d.index("W1"));
  EXPECT_EQ(c.terms[1].openers.front(), d.index("W2"));
  EXPECT_EQ(eval(d, c), test::pcov(d, "X", "Y", {"C'", "U1", "L1", "W1", "W2"}));
}

TEST(Colliders, OpenerOrderDoesNotChangeValue) {
  const auto d = test::load("fig4.sem");
  const auto s = implied_covariance(d);
  const NodeSet z = test::nodes(d, {"C'", "U1", "W1", "W2"});
  const std::vector<NodeIndex> fwd{d.index("W1"), d.index("W2")};
  const std::vector<NodeIndex> rev{d.index("W2"), d.index("W1")};
  const auto a = factorize_with_colliders(d, s, d.index("X"), d.index("Y"), z, &fwd);
  const auto b = factorize_with_colliders(d, s, d.index("X"), d.index("Y"), z, &rev);
  EXPECT_NE(a.terms[0].openers, b.terms[0].openers);
  EXPECT_EQ(evaluate_certificate(a, s), evaluate_certificate(b, s));
  EXPECT_EQ(evaluate_certificate(a, s), partial_cov_schur(s, d.index("X"), d.index("Y"), z));
}

TEST(Colliders, UnopenedColliderIsClosed) {
  const auto d = test::load("fig4.sem");
  const auto c = fac(d, "X", "Y", {"W1"});
  EXPECT_EQ(c.kind, CertificateKind::closed);
  EXPECT_EQ(eval(d, c), Rational(0));
  EXPECT_EQ(test::pcov(d, "X", "Y", {"W1"}), Rational(0));
}

TEST(Factorize, DisconnectedPair) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 1");
  const auto c = fac(d, "X", "Y", {});
  EXPECT_EQ(c.kind, CertificateKind::disconnected);
  EXPECT_EQ(eval(d, c), Rational(0));
}

TEST(Factorize, FloatModeCloseToExact) {
  const auto d = test::load("fig4.sem");
  const auto df = d.cast<double>();
  const NodeSet z = test::nodes(d, {"C'", "U1", "L1", "W1", "W2"});
  const auto sf = implied_covariance(df);
  const auto c = factorize(df, sf, d.index("X"), d.index("Y"), z);
  EXPECT_NEAR(evaluate_certificate(c, sf), test::pcov(d, "X", "Y", {"C'", "U1", "L1", "W1", "W2"}).to_double(), 1e-12);
}

TEST(Factorize, RatioFactorsLieInUnitInterval) {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto d = random_singly_connected(rng);
    const auto s = implied_covariance(d);
    PartialCovOracle<Rational> o(s);
    const NodeSet z = d.graph().all() - NodeSet{0, 1};
    NodeSet pick;
    for (NodeIndex v : z.to_vector()) {
      if (rng.bernoulli(0.4)) pick.insert(v);
    }
    const auto c = factorize(d, s, 0, 1, pick);
    if (c.kind != CertificateKind::collider_free) continue;
    for (const auto& f : c.factors) {
      const Rational r = o.var(f.node, f.num) / o.var(f.node, f.den);
      EXPECT_GT(r, Rational(0));
      EXPECT_LE(r, Rational(1));
    }
    EXPECT_EQ(sign_of(evaluate_certificate(c, o)), sign_of(c.base));
  }
}

}  // namespace
}  // namespace pathcov
