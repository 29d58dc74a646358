#include "support.hpp"

#include <algorithm>

#include "pathcov/conditioning.hpp"
#include "pathcov/simpson.hpp"

namespace pathcov {
namespace {

NodeSet random_subset(Rng& rng, NodeSet pool, double p) {
  NodeSet out;
  for (NodeIndex v : pool.to_vector()) {
    if (rng.bernoulli(p)) out.insert(v);
  }
  return out;
}

TEST(Properties, RecursionMatchesSchurInAnyOrder) {
  Rng rng(101);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_diagram(rng, rng.between(3, 8), 0.4, 0.15);
    const auto s = implied_covariance(d);
    const NodeIndex x = rng.between(0, d.size() - 1);
    const NodeIndex y = rng.between(0, d.size() - 1);
    auto z = random_subset(rng, d.graph().all() - NodeSet{x, y}, 0.4).to_vector();
    const Rational want = partial_cov_schur(s, x, y, NodeSet::of(z));
    for (int k = 0; k < 3; ++k) {
      rng.shuffle(z);
      EXPECT_EQ(partial_cov_recursive(s, x, y, z), want);
    }
  }
}

TEST(Properties, ConditioningNeverIncreasesVariance) {
  Rng rng(102);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_diagram(rng, rng.between(3, 8), 0.4, 0.15);
    PartialCovOracle<Rational> o(implied_covariance(d));
    const NodeIndex x = rng.between(0, d.size() - 1);
    const NodeSet pool = d.graph().all() - NodeSet::single(x);
    const NodeSet z = random_subset(rng, pool, 0.3);
    const NodeSet w = z | random_subset(rng, pool, 0.3);
    EXPECT_LE(o.var(x, w), o.var(x, z));
  }
}

TEST(Properties, SeparationImpliesZeroPartialCovariance) {
  Rng rng(103);
  int separated = 0;
  for (int i = 0; i < 80; ++i) {
    const auto d = random_diagram(rng, rng.between(3, 8), 0.3, 0.1);
    const auto s = implied_covariance(d);
    for (NodeIndex x = 0; x < d.size(); ++x) {
      for (NodeIndex y = x + 1; y < d.size(); ++y) {
        const NodeSet z = random_subset(rng, d.graph().all() - NodeSet{x, y}, 0.3);
        if (!d_separated(d.graph(), x, y, z)) continue;
        ++separated;
        EXPECT_EQ(partial_cov_schur(s, x, y, z), Rational(0));
      }
    }
  }
  EXPECT_GT(separated, 100);
}

TEST(Properties, SinglyConnectedHasAtMostOnePath) {
  Rng rng(104);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_singly_connected(rng);
    for (NodeIndex x = 0; x < d.size(); ++x) {
      for (NodeIndex y = x + 1; y < d.size(); ++y) EXPECT_LE(enumerate_paths(d.graph(), x, y).size(), 1u);
    }
  }
}

TEST(Properties, PathsAndRoutesAgree) {
  Rng rng(105);
  for (int i = 0; i < 30; ++i) {
    const auto d = random_diagram(rng, rng.between(3, 7), 0.35, 0.15);
    const Graph& g = d.graph();
    for (NodeIndex x = 0; x < d.size(); ++x) {
      for (NodeIndex y = x + 1; y < d.size(); ++y) {
        const NodeSet z = random_subset(rng, g.all() - NodeSet{x, y}, 0.35);
        const auto paths = enumerate_paths(g, x, y);
        const bool by_path =
            std::any_of(paths.begin(), paths.end(), [&](const Path& p) { return is_path_open(g, p, z); });
        const auto route = open_route(g, x, y, z);
        EXPECT_EQ(by_path, route.has_value());
        if (route) EXPECT_TRUE(is_route_open(*route, z));
      }
    }
  }
}

TEST(Properties, ColliderFreeSignIsPreserved) {
  Rng rng(106);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_singly_connected(rng);
    PartialCovOracle<Rational> o(implied_covariance(d));
    for (NodeIndex x = 0; x < d.size(); ++x) {
      for (NodeIndex y = x + 1; y < d.size(); ++y) {
        const auto ps = enumerate_paths(d.graph(), x, y);
        if (ps.empty() || !colliders_in(ps[0]).empty()) continue;
        const int base = sign_of(o.cov(x, y, {}));
        for (NodeSet z : subsets_by_size(d.graph(), d.graph().all() - NodeSet{x, y}, 2)) {
          const int s = sign_of(o.cov(x, y, z));
          if (s != 0) EXPECT_EQ(s, base);
        }
      }
    }
  }
}

TEST(Properties, SuccessfulCheckersAgreeWithOracle) {
  Rng rng(107);
  int applied = 0;
  for (int i = 0; i < 150; ++i) {
    const auto d = random_diagram(rng, rng.between(4, 8), 0.35, 0.1);
    const NodeIndex x = rng.between(0, d.size() - 1);
    NodeIndex y = rng.between(0, d.size() - 2);
    if (y >= x) ++y;
    const NodeSet s = random_subset(rng, d.graph().all() - NodeSet{x, y}, 0.3);
    if (!d_connected(d.graph(), x, y, s)) continue;
    const auto dc = condition_on(d, s);
    const auto sigma = implied_covariance(dc.diagram);
    const Rational want = partial_cov_schur(sigma, x, y, dc.z());
    for (const auto& res : {check_root_form(dc, x, y), check_nonroot_form(dc, x, y)}) {
      if (!res.plan) continue;
      ++applied;
      EXPECT_EQ(evaluate_certificate(factorize_conditioned(dc, sigma, *res.plan), sigma), want)
          << serialize(d) << "x=" << d.name(x) << " y=" << d.name(y) << " s=" << d.graph().format(s);
    }
  }
  EXPECT_GT(applied, 20);
}

TEST(Properties, MonotoneChainKeepsRegressionSign) {
  Rng rng(108);
  for (int i = 0; i < 40; ++i) {
    // X -> M -> Y with a conditioned node hanging off every chain node
    PathDiagram<Rational> d;
    for (const char* n : {"X", "M", "Y", "A", "B", "C"}) d.add_node(n, Rational(rng.between(2, 8)) / 4);
    const Rational a = random_coefficient(rng), b = random_coefficient(rng);
    d.add_edge(0, 1, a);
    d.add_edge(1, 2, b);
    d.add_edge(3, 0, random_coefficient(rng));
    d.add_edge(1, 4, random_coefficient(rng));
    d.add_edge(2, 5, random_coefficient(rng));
    const auto s = implied_covariance(d);
    const Rational r = regression_coef(s, 2, 0, NodeSet{3, 4, 5});
    EXPECT_EQ(sign_of(r), sign_of(a * b));
  }
}

}  // namespace
}  // namespace pathcov
