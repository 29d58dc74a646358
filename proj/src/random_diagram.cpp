#include "pathcov/random_diagram.hpp"

#include <numeric>

namespace pathcov {

namespace {

Rational quarter(int k) { return Rational(k) / Rational(4); }

std::vector<std::string> shuffled_names(Rng& rng, int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    names.push_back(i < 26 ? std::string(1, static_cast<char>('A' + i)) : "V" + std::to_string(i));
  }
  rng.shuffle(names);
  return names;
}

/// Redraw error covariances until Omega is positive definite; after a few
/// failures shrink them instead.
void make_positive_definite(PathDiagram<Rational>& d, Rng& rng) {
  const int m = static_cast<int>(d.graph().bidirected().size());
  if (m == 0) return;
  for (int attempt = 0; attempt < 20; ++attempt) {
    if (is_positive_definite(d.omega())) return;
    for (int k = 0; k < m; ++k) d.set_errcov(k, random_coefficient(rng));
  }
  while (!is_positive_definite(d.omega())) {
    for (int k = 0; k < m; ++k) d.set_errcov(k, d.errcov(k) / Rational(2));
  }
}

}  // namespace

Rational random_coefficient(Rng& rng) {
  int k = rng.between(1, 8);
  return quarter(rng.bernoulli(0.5) ? k : -k);
}

PathDiagram<Rational> random_singly_connected(Rng& rng, const RandomDiagramOptions& opt) {
  const int n = rng.between(opt.min_nodes, opt.max_nodes);
  const auto names = shuffled_names(rng, n);
  PathDiagram<Rational> d;
  for (int i = 0; i < n; ++i) d.add_node(names[i], quarter(rng.between(2, 8)));
  const bool forest = rng.bernoulli(opt.forest_probability);
  for (int i = 1; i < n; ++i) {
    if (forest && rng.bernoulli(0.25)) continue;
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    if (rng.bernoulli(opt.bidirected_probability)) {
      d.add_covariance(j, i, random_coefficient(rng));
    } else if (rng.bernoulli(0.5)) {
      d.add_edge(j, i, random_coefficient(rng));
    } else {
      d.add_edge(i, j, random_coefficient(rng));
    }
  }
  make_positive_definite(d, rng);
  return d;
}

PathDiagram<Rational> random_diagram(Rng& rng, int nodes, double edge_probability, double bidirected_probability) {
  const auto names = shuffled_names(rng, nodes);
  std::vector<int> order(static_cast<std::size_t>(nodes));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  PathDiagram<Rational> d;
  for (int i = 0; i < nodes; ++i) d.add_node(names[i], quarter(rng.between(2, 8)));
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) {
      if (rng.bernoulli(edge_probability)) d.add_edge(order[i], order[j], random_coefficient(rng));
    }
  }
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) {
      if (rng.bernoulli(bidirected_probability)) d.add_covariance(i, j, random_coefficient(rng));
    }
  }
  make_positive_definite(d, rng);
  return d;
}

}  // namespace pathcov
