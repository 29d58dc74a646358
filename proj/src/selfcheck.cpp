#include "pathcov/selfcheck.hpp"

#include "pathcov/dsl.hpp"
#include "pathcov/factorization.hpp"
#include "pathcov/random_diagram.hpp"
#include "pathcov/separation.hpp"

namespace pathcov {

namespace {

std::vector<NodeSet> conditioning_sets(NodeSet pool, int n, const SelfcheckOptions& opt, Rng& rng) {
  std::vector<NodeSet> out;
  const auto members = pool.to_vector();
  if (n <= opt.exhaustive_max_nodes) {
    const std::uint64_t count = std::uint64_t{1} << members.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      NodeSet z;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (mask >> i & 1) z.insert(members[i]);
      }
      out.push_back(z);
    }
    return out;
  }
  out.push_back(NodeSet{});
  for (int k = 1; k < opt.sampled_sets; ++k) {
    NodeSet z;
    for (NodeIndex m : members) {
      if (rng.bernoulli(0.35)) z.insert(m);
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace

SelfcheckReport run_selfcheck(const SelfcheckOptions& opt) {
  SelfcheckReport rep;
  Rng corpus = Rng::stream(opt.seed, 0);
  Rng rng = Rng::stream(opt.seed, 1);
  for (int i = 0; i < opt.diagrams; ++i) {
    const auto d = random_singly_connected(corpus);
    const Graph& g = d.graph();
    const auto sigma = implied_covariance(d);
    PartialCovOracle<Rational> oracle(sigma);
    ++rep.diagrams;
    for (NodeIndex x = 0; x < d.size(); ++x) {
      for (NodeIndex y = x + 1; y < d.size(); ++y) {
        for (NodeSet z : conditioning_sets(g.all() - NodeSet{x, y}, d.size(), opt, rng)) {
          if (!d_connected(g, x, y, z)) continue;
          ++rep.queries;
          std::string problem;
          try {
            const auto cert = factorize(d, sigma, x, y, z);
            const Rational got = evaluate_certificate(cert, oracle);
            const Rational want = partial_cov_schur(sigma, x, y, z);
            if (got != want) problem = "certificate " + got.str() + " != oracle " + want.str();
          } catch (const Error& e) {
            problem = e.what();
          }
          if (problem.empty()) {
            ++rep.passed;
            continue;
          }
          ++rep.failed;
          if (static_cast<int>(rep.failures.size()) < opt.max_failures_kept) {
            rep.failures.push_back("diagram " + std::to_string(i) + " (" + g.name(x) + ", " + g.name(y) + " | " +
                                   g.format(z) + "): " + problem + "\n" + serialize(d));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace pathcov
