#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pathcov/node_set.hpp"

namespace pathcov {

enum class EdgeKind { directed, bidirected };

/// Reference to an edge of a diagram: its kind and its position in the
/// corresponding edge list.
struct EdgeRef {
  EdgeKind kind = EdgeKind::directed;
  int index = 0;
  friend bool operator==(EdgeRef, EdgeRef) = default;
};

/// An edge seen from one of its endpoints.
struct Incidence {
  EdgeRef edge;
  NodeIndex other = 0;
  bool head_here = false;   // arrowhead at this endpoint
  bool head_there = false;  // arrowhead at the other endpoint
};

struct DirectedArc {
  NodeIndex tail = 0;
  NodeIndex head = 0;
};

struct BidirectedArc {
  NodeIndex a = 0;
  NodeIndex b = 0;
};

/// Topology of a path diagram: named nodes, directed and bidirected edges.
///
/// Rejects self-loops, duplicate edges and more than `kMaxNodes` nodes at
/// insertion time. Acyclicity is a property reported by validation, not an
/// insertion-time constraint.
class Graph {
 public:
  NodeIndex add_node(std::string name);
  EdgeRef add_directed(NodeIndex tail, NodeIndex head);
  EdgeRef add_bidirected(NodeIndex a, NodeIndex b);

  int size() const { return static_cast<int>(names_.size()); }
  NodeSet all() const;
  const std::string& name(NodeIndex n) const { return names_.at(n); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeIndex> find(std::string_view name) const;
  /// Like find(), but throws InputError for an unknown name.
  NodeIndex index(std::string_view name) const;

  const std::vector<DirectedArc>& directed() const { return directed_; }
  const std::vector<BidirectedArc>& bidirected() const { return bidirected_; }
  const std::vector<Incidence>& incident(NodeIndex n) const { return incident_.at(n); }

  bool has_directed(NodeIndex tail, NodeIndex head) const;
  bool has_bidirected(NodeIndex a, NodeIndex b) const;

  NodeSet parents(NodeIndex n) const;
  NodeSet children(NodeIndex n) const;
  NodeSet spouses(NodeIndex n) const;
  /// Reflexive-transitive closure of children().
  NodeSet descendants(NodeIndex n) const;
  NodeSet descendants(NodeSet ns) const;

  /// Topological order of the directed part, or nullopt when it has a cycle.
  std::optional<std::vector<NodeIndex>> topological_order() const;

  /// True iff the skeleton (all edges, orientation dropped, parallel edges
  /// kept) has no cycle.
  bool singly_connected() const;

  /// Connected component of the skeleton containing n.
  NodeSet component(NodeIndex n) const;

  std::string format(NodeSet s) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeIndex> lookup_;
  std::vector<DirectedArc> directed_;
  std::vector<BidirectedArc> bidirected_;
  std::vector<std::vector<Incidence>> incident_;
};

}  // namespace pathcov
