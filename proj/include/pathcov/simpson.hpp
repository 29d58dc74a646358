#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pathcov/sem_algebra.hpp"
#include "pathcov/separation.hpp"

namespace pathcov {

template <typename Scalar>
struct SignEntry {
  NodeSet given;
  int sign = 0;
  Scalar value;
};

template <typename Scalar>
struct SignReport {
  NodeIndex x = 0;
  NodeIndex y = 0;
  std::vector<SignEntry<Scalar>> entries;
  bool invariant_holds = true;
};

/// Subsets of pool with at most max_size elements, ordered by size and then
/// lexicographically by their name-sorted member lists.
std::vector<NodeSet> subsets_by_size(const Graph& g, NodeSet pool, int max_size);

/// Signs of sigma_{xy.Z} over every Z (|Z| <= max_size, x, y excluded)
/// that leaves some x-y path open. With no path at all, every Z is listed
/// with value zero.
template <typename Scalar>
SignReport<Scalar> sign_invariance_check(const Graph& g, PartialCovOracle<Scalar>& oracle, NodeIndex x, NodeIndex y,
                                         int max_size) {
  SignReport<Scalar> r;
  r.x = x;
  r.y = y;
  const NodeSet pool = g.all() - NodeSet{x, y};
  const bool connected = g.component(x).contains(y);
  int seen = 0;
  for (NodeSet z : subsets_by_size(g, pool, max_size)) {
    if (connected && !d_connected(g, x, y, z)) continue;
    Scalar v = connected ? oracle.cov(x, y, z) : Scalar(0);
    const int s = sign_of(v);
    if (s != 0) {
      if (seen != 0 && s != seen) r.invariant_holds = false;
      seen = s;
    }
    r.entries.push_back({z, s, std::move(v)});
  }
  return r;
}

enum class Association { covariance, regression };

/// Gaussian collapsibility of the x-y association over a single z.
template <typename Scalar>
bool collapsibility_check(PartialCovOracle<Scalar>& oracle, NodeIndex x, NodeIndex y, NodeIndex z, Association g) {
  const NodeSet zs = NodeSet::single(z);
  if (g == Association::covariance) return oracle.cov(x, y, zs) == oracle.cov(x, y, NodeSet{});
  return oracle.cov(x, y, zs) / oracle.var(x, zs) == oracle.cov(x, y, NodeSet{}) / oracle.var(x, NodeSet{});
}

template <typename Scalar>
struct Reversal {
  NodeSet given;
  int sign_before = 0;
  int sign_after = 0;
  Scalar before;
  Scalar after;
};

/// First Z in size-then-name order whose nonzero sign of sigma_{xy.Z}
/// differs from the sign of sigma_xy. Zero never counts as a reversal.
template <typename Scalar>
std::optional<Reversal<Scalar>> find_simpson_reversal(const Graph& g, PartialCovOracle<Scalar>& oracle, NodeIndex x,
                                                      NodeIndex y, int max_size) {
  const Scalar before = oracle.cov(x, y, NodeSet{});
  const int s0 = sign_of(before);
  if (s0 == 0) return std::nullopt;
  for (NodeSet z : subsets_by_size(g, g.all() - NodeSet{x, y}, max_size)) {
    if (z.empty()) continue;
    Scalar after = oracle.cov(x, y, z);
    const int s = sign_of(after);
    if (s != 0 && s != s0) return Reversal<Scalar>{z, s0, s, before, std::move(after)};
  }
  return std::nullopt;
}

}  // namespace pathcov
