#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathcov/graph.hpp"

namespace pathcov {

/// One edge traversal of a path or route.
struct Step {
  EdgeRef edge;
  bool head_at_next = false;  // arrowhead at the node this step arrives at
  bool head_at_prev = false;  // arrowhead at the node this step leaves
};

/// Alternating node/edge sequence. A Path has distinct nodes; a Route
/// (same representation) may revisit nodes and edges.
struct Path {
  std::vector<NodeIndex> nodes;
  std::vector<Step> steps;

  NodeIndex front() const { return nodes.front(); }
  NodeIndex back() const { return nodes.back(); }
  int length() const { return static_cast<int>(steps.size()); }
  /// True iff the occurrence at position k (0 < k < nodes-1) is a collider.
  bool collider_at(std::size_t k) const { return steps[k - 1].head_at_next && steps[k].head_at_prev; }
  NodeSet node_set() const { return NodeSet::of(nodes); }
  Path reversed() const;
  /// Sub-path between positions from and to (inclusive); reversed if from > to.
  Path slice(std::size_t from, std::size_t to) const;
};

using Route = Path;

/// All simple skeleton paths from x to y, ordered lexicographically by the
/// node-name sequence (edge kind breaks ties between parallel edges).
std::vector<Path> enumerate_paths(const Graph& g, NodeIndex x, NodeIndex y);

/// Nodes at collider occurrences. For routes this includes one-node
/// subroutes A -> C <- A.
NodeSet colliders_in(const Path& p);

/// Path criterion: colliders in z or with a descendant in z, other interior
/// nodes outside z.
bool is_path_open(const Graph& g, const Path& p, NodeSet z);

/// Route criterion: collider occurrences in z, other interior occurrences
/// outside z. No descendant clause.
bool is_route_open(const Path& r, NodeSet z);

/// First z-open path from x to y in enumeration order, if any.
std::optional<Path> open_path(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z);

bool d_connected(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z);
inline bool d_separated(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z) { return !d_connected(g, x, y, z); }

/// Default bound on route length (in nodes): 2 * edges + 1.
int route_bound(const Graph& g);

/// Shortest z-open route from x to y with at most max_nodes nodes. Searches
/// states (node, arrived with a head) breadth first.
std::optional<Route> open_route(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z, int max_nodes);
std::optional<Route> open_route(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z);

/// Nodes W in z reachable from c by a directed path whose nodes before W
/// are outside z. Just {c} when c is in z.
NodeSet openers(const Graph& g, NodeIndex c, NodeSet z);

/// Directed path c -> ... -> w with interior outside z, if any.
std::optional<Path> opener_chain(const Graph& g, NodeIndex c, NodeIndex w, NodeSet z);

/// "X -> C <-> D <- Y".
std::string format_path(const Graph& g, const Path& p);

}  // namespace pathcov
