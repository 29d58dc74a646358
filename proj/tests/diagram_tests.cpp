#include "support.hpp"

#include "pathcov/error.hpp"

namespace pathcov {
namespace {

using test::q;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(q("3/6").str(), "1/2");
  EXPECT_EQ(q("-4").str(), "-4");
  EXPECT_EQ(q("0.8").str(), "4/5");
  EXPECT_EQ(q("-1.25").str(), "-5/4");
  EXPECT_EQ(q("010").str(), "10");
  EXPECT_THROW(q("1/0"), Error);
  EXPECT_THROW(q("abc"), InputError);
}

TEST(Rational, DivisionByZeroIsDomainError) { EXPECT_THROW(Rational(1) / Rational(0), DomainError); }

TEST(Dsl, ParsesOneEdge) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 1\nedge X -> Y coef 0.8");
  ASSERT_EQ(d.size(), 2);
  ASSERT_EQ(d.graph().directed().size(), 1u);
  EXPECT_EQ(d.coef(0), q("4/5"));
  EXPECT_TRUE(d.graph().has_directed(d.index("X"), d.index("Y")));
}

TEST(Dsl, CommentsAndBidirectedEdges) {
  const auto d = parse_diagram("# header\nnode A noise 2 # trailing\nnode B noise 1/2\n\nedge A <-> B cov -1/3\n");
  ASSERT_EQ(d.graph().bidirected().size(), 1u);
  EXPECT_EQ(d.errcov(0), q("-1/3"));
  EXPECT_EQ(d.noise(d.index("B")), q("1/2"));
}

TEST(Dsl, EdgesMayPrecedeNodeDeclarations) {
  const auto d = parse_diagram("edge X -> Y coef 1\nnode Y noise 1\nnode X noise 1\n");
  EXPECT_TRUE(d.graph().has_directed(d.index("X"), d.index("Y")));
}

ParseError::Kind parse_kind(std::string_view text) {
  try {
    parse_diagram(text);
  } catch (const ParseError& e) {
    return e.kind();
  } catch (const DiagramError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ParseError::Kind::syntax;
}

TEST(Dsl, ReportsEachErrorKind) {
  EXPECT_EQ(parse_kind("node X noise 1\nedge X -> X coef 1"), ParseError::Kind::self_loop);
  EXPECT_EQ(parse_kind("node X noise 1\nnode X noise 2"), ParseError::Kind::duplicate_node);
  EXPECT_EQ(parse_kind("node X noise 1\nnode Y noise 1\nedge X -> Y coef 1\nedge X -> Y coef 2"),
            ParseError::Kind::duplicate_edge);
  EXPECT_EQ(parse_kind("node X noise 1\nedge X -> Q coef 1"), ParseError::Kind::unknown_node);
  EXPECT_EQ(parse_kind("node X nois 1"), ParseError::Kind::syntax);
  EXPECT_EQ(parse_kind("node X noise"), ParseError::Kind::syntax);
  EXPECT_EQ(parse_kind("vertex X"), ParseError::Kind::syntax);
}

TEST(Dsl, ErrorsCarryLineAndColumn) {
  try {
    parse_diagram("node X noise 1\nnode Y noise 1\nedge X => Y coef 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 8);
    EXPECT_NE(std::string(e.what()).find("line 3, column 8"), std::string::npos);
  }
}

TEST(Dsl, SerializeIsCanonical) {
  const auto d = parse_diagram(
      "node Z noise 1\nnode A noise 3/2\nnode M noise 1\nedge Z -> A coef -2\nedge A -> M coef 1/4\n"
      "edge M <-> Z cov 1/5\n");
  EXPECT_EQ(serialize(d),
            "node A noise 3/2\nnode M noise 1\nnode Z noise 1\n"
            "edge A -> M coef 1/4\nedge Z -> A coef -2\n"
            "edge M <-> Z cov 1/5\n");
}

TEST(Dsl, ParseSerializeRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto d = random_diagram(rng, 6, 0.4, 0.15);
    const std::string text = serialize(d);
    EXPECT_EQ(serialize(parse_diagram(text)), text);
  }
}

TEST(Dsl, MissingFileIsInputError) { EXPECT_THROW(load_diagram("/nonexistent/x.sem"), InputError); }

TEST(Validate, AcceptsFigureOne) {
  const auto r = validate(test::load("fig1.sem"));
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.singly_connected);
}

TEST(Validate, RejectsNonPositiveDefiniteErrors) {
  const auto d = parse_diagram("node A noise 1\nnode B noise 1\nedge A <-> B cov 2");
  const auto r = validate(d);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("leading minor 2"), std::string::npos);
  EXPECT_THROW(implied_covariance(d), PreconditionError);
}

TEST(Validate, RejectsCyclesAndBadNoise) {
  auto d = parse_diagram("node A noise 1\nnode B noise 0\nedge A -> B coef 1\nedge B -> A coef 1");
  const auto r = validate(d);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violations.size(), 3u);  // cycle, zero noise, Omega singular
}

TEST(Validate, FlagsMultiplyConnectedDiagrams) {
  EXPECT_FALSE(validate(test::load("triangle.sem")).singly_connected);
  EXPECT_FALSE(validate(test::load("fig8.sem")).singly_connected);
  EXPECT_TRUE(validate(test::load("fig4.sem")).singly_connected);
}

TEST(Graph, Neighbourhoods) {
  const auto d = test::load("fig4.sem");
  const Graph& g = d.graph();
  const NodeIndex c = d.index("C");
  EXPECT_EQ(g.format(g.parents(c)), "{X}");
  EXPECT_EQ(g.format(g.children(c)), "{W1,W2}");
  EXPECT_EQ(g.format(g.spouses(c)), "{C'}");
  EXPECT_EQ(g.format(g.descendants(c)), "{C,L1,W1,W2}");
}

TEST(Graph, IsolatedNode) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 1");
  const Graph& g = d.graph();
  const NodeIndex x = d.index("X");
  EXPECT_TRUE(g.parents(x).empty());
  EXPECT_TRUE(g.children(x).empty());
  EXPECT_TRUE(g.spouses(x).empty());
  EXPECT_EQ(g.descendants(x), NodeSet::single(x));
  EXPECT_THROW(g.index("Q"), InputError);
}

TEST(Graph, ParallelEdgesBreakSingleConnection) {
  const auto d = parse_diagram("node X noise 1\nnode Y noise 1\nedge X -> Y coef 1\nedge X <-> Y cov 1/2");
  EXPECT_FALSE(d.graph().singly_connected());
}

TEST(Graph, RejectsTooManyNodes) {
  Graph g;
  for (int i = 0; i < kMaxNodes; ++i) g.add_node("N" + std::to_string(i));
  EXPECT_THROW(g.add_node("extra"), DiagramError);
}

TEST(RandomDiagrams, SinglyConnectedGeneratorHonoursItsContract) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_singly_connected(rng);
    EXPECT_GE(d.size(), 4);
    EXPECT_LE(d.size(), 10);
    const auto r = validate(d);
    EXPECT_TRUE(r.ok);
    EXPECT_TRUE(r.singly_connected);
    const int edges = static_cast<int>(d.graph().directed().size() + d.graph().bidirected().size());
    EXPECT_LE(edges, d.size() - 1);
    for (std::size_t k = 0; k < d.graph().directed().size(); ++k) {
      const Rational& c = d.coef(static_cast<int>(k));
      EXPECT_FALSE(c.is_zero());
      EXPECT_LE(abs(c), Rational(2));
    }
    for (NodeIndex n = 0; n < d.size(); ++n) {
      EXPECT_GE(d.noise(n), q("1/2"));
      EXPECT_LE(d.noise(n), Rational(2));
    }
  }
}

}  // namespace
}  // namespace pathcov
