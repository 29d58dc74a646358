#pragma once

#include "pathcov/diagram.hpp"
#include "pathcov/rng.hpp"

namespace pathcov {

struct RandomDiagramOptions {
  int min_nodes = 4;
  int max_nodes = 10;
  /// Chance that the skeleton is a forest rather than a tree.
  double forest_probability = 0.2;
  double bidirected_probability = 0.2;
};

/// Random singly-connected diagram. Coefficients and error covariances are
/// multiples of 1/4 in [-2, 2] without zero, noise variances multiples of
/// 1/4 in [1/2, 2]. Node names are single letters in shuffled order.
PathDiagram<Rational> random_singly_connected(Rng& rng, const RandomDiagramOptions& opt = {});

/// Random diagram without the singly-connected restriction: each ordered
/// pair of a random topological order gets an edge with edge_probability,
/// each unordered pair an error covariance with bidirected_probability.
PathDiagram<Rational> random_diagram(Rng& rng, int nodes, double edge_probability, double bidirected_probability);

/// Random nonzero multiple of 1/4 in [-2, 2].
Rational random_coefficient(Rng& rng);

}  // namespace pathcov
