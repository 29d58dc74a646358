#pragma once

#include <optional>
#include <vector>

#include "pathcov/sem_algebra.hpp"
#include "pathcov/separation.hpp"

namespace pathcov {

template <typename Scalar>
struct TracedPath {
  Path path;
  Scalar product;                  // edge coefficients and error covariances
  std::optional<NodeIndex> root;   // none for paths through a bidirected edge
  Scalar root_variance;            // 1 when rootless
  Scalar contribution;
};

template <typename Scalar>
struct TraceDecomposition {
  std::vector<TracedPath<Scalar>> paths;
  Scalar total;
};

/// Node of a collider-free path that no step points into.
inline std::optional<NodeIndex> path_root(const Path& p) {
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    const bool in_left = k > 0 && p.steps[k - 1].head_at_next;
    const bool in_right = k < p.steps.size() && p.steps[k].head_at_prev;
    if (!in_left && !in_right) return p.nodes[k];
  }
  return std::nullopt;
}

/// Path tracing: each empty-set-open path contributes the product of its
/// edge values times the total variance of its root. The total variance of
/// a node (x == y) is the trivial one-node path, read from sigma.
template <typename Scalar>
TraceDecomposition<Scalar> trace_decomposition(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma,
                                               NodeIndex x, NodeIndex y) {
  TraceDecomposition<Scalar> out{{}, Scalar(0)};
  for (const auto& p : enumerate_paths(d.graph(), x, y)) {
    if (!colliders_in(p).empty()) continue;
    Scalar product(1);
    for (const auto& s : p.steps) product *= d.value(s.edge);
    const auto root = path_root(p);
    Scalar rv = root ? sigma(*root, *root) : Scalar(1);
    Scalar c = product * rv;
    out.total += c;
    out.paths.push_back({p, std::move(product), root, std::move(rv), std::move(c)});
  }
  return out;
}

template <typename Scalar>
Scalar trace_covariance(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x, NodeIndex y) {
  return trace_decomposition(d, sigma, x, y).total;
}

template <typename Scalar>
Scalar trace_covariance(const PathDiagram<Scalar>& d, NodeIndex x, NodeIndex y) {
  return trace_covariance(d, implied_covariance(d), x, y);
}

}  // namespace pathcov
