#include "pathcov/graph.hpp"

#include <algorithm>
#include <numeric>

#include "pathcov/error.hpp"

namespace pathcov {

NodeIndex Graph::add_node(std::string name) {
  if (lookup_.contains(name)) {
    throw DiagramError(ParseError::Kind::duplicate_node, "duplicate node '" + name + "'");
  }
  if (size() >= kMaxNodes) {
    throw DiagramError(ParseError::Kind::too_many_nodes,
                       "diagrams are limited to " + std::to_string(kMaxNodes) + " nodes");
  }
  const NodeIndex n = size();
  lookup_.emplace(name, n);
  names_.push_back(std::move(name));
  incident_.emplace_back();
  return n;
}

EdgeRef Graph::add_directed(NodeIndex tail, NodeIndex head) {
  if (tail == head) {
    throw DiagramError(ParseError::Kind::self_loop, "self-loop on '" + name(tail) + "'");
  }
  if (has_directed(tail, head)) {
    throw DiagramError(ParseError::Kind::duplicate_edge,
                       "duplicate edge " + name(tail) + " -> " + name(head));
  }
  const EdgeRef ref{EdgeKind::directed, static_cast<int>(directed_.size())};
  directed_.push_back({tail, head});
  incident_[tail].push_back({ref, head, false, true});
  incident_[head].push_back({ref, tail, true, false});
  return ref;
}

EdgeRef Graph::add_bidirected(NodeIndex a, NodeIndex b) {
  if (a == b) {
    throw DiagramError(ParseError::Kind::self_loop, "self-loop on '" + name(a) + "'");
  }
  if (has_bidirected(a, b)) {
    throw DiagramError(ParseError::Kind::duplicate_edge,
                       "duplicate edge " + name(a) + " <-> " + name(b));
  }
  const EdgeRef ref{EdgeKind::bidirected, static_cast<int>(bidirected_.size())};
  bidirected_.push_back({a, b});
  incident_[a].push_back({ref, b, true, true});
  incident_[b].push_back({ref, a, true, true});
  return ref;
}

NodeSet Graph::all() const {
  return size() == kMaxNodes ? NodeSet(~std::uint64_t{0}) : NodeSet((std::uint64_t{1} << size()) - 1);
}

std::optional<NodeIndex> Graph::find(std::string_view name) const {
  const auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Graph::index(std::string_view name) const {
  if (auto n = find(name)) return *n;
  throw InputError("unknown node '" + std::string(name) + "'");
}

bool Graph::has_directed(NodeIndex tail, NodeIndex head) const {
  return std::ranges::any_of(incident_.at(tail), [&](const Incidence& inc) {
    return inc.edge.kind == EdgeKind::directed && inc.other == head && inc.head_there;
  });
}

bool Graph::has_bidirected(NodeIndex a, NodeIndex b) const {
  return std::ranges::any_of(incident_.at(a), [&](const Incidence& inc) {
    return inc.edge.kind == EdgeKind::bidirected && inc.other == b;
  });
}

NodeSet Graph::parents(NodeIndex n) const {
  NodeSet s;
  for (const auto& inc : incident(n)) {
    if (inc.edge.kind == EdgeKind::directed && inc.head_here) s.insert(inc.other);
  }
  return s;
}

NodeSet Graph::children(NodeIndex n) const {
  NodeSet s;
  for (const auto& inc : incident(n)) {
    if (inc.edge.kind == EdgeKind::directed && inc.head_there) s.insert(inc.other);
  }
  return s;
}

NodeSet Graph::spouses(NodeIndex n) const {
  NodeSet s;
  for (const auto& inc : incident(n)) {
    if (inc.edge.kind == EdgeKind::bidirected) s.insert(inc.other);
  }
  return s;
}

NodeSet Graph::descendants(NodeIndex n) const { return descendants(NodeSet::single(n)); }

NodeSet Graph::descendants(NodeSet ns) const {
  NodeSet seen = ns;
  std::vector<NodeIndex> stack = ns.to_vector();
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex c : children(v)) {
      if (!seen.contains(c)) {
        seen.insert(c);
        stack.push_back(c);
      }
    }
  }
  return seen;
}

std::optional<std::vector<NodeIndex>> Graph::topological_order() const {
  std::vector<int> indegree(size(), 0);
  for (const auto& e : directed_) ++indegree[e.head];
  std::vector<NodeIndex> ready;
  for (NodeIndex n = size() - 1; n >= 0; --n) {
    if (indegree[n] == 0) ready.push_back(n);
  }
  std::vector<NodeIndex> order;
  order.reserve(size());
  while (!ready.empty()) {
    const NodeIndex v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (NodeIndex c : children(v)) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != size()) return std::nullopt;
  return order;
}

bool Graph::singly_connected() const {
  // A forest has exactly (nodes - components) edges.
  std::vector<int> parent(size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  const auto join = [&](int a, int b) {
    a = root(a);
    b = root(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  };
  for (const auto& e : directed_) {
    if (!join(e.tail, e.head)) return false;
  }
  for (const auto& e : bidirected_) {
    if (!join(e.a, e.b)) return false;
  }
  return true;
}

NodeSet Graph::component(NodeIndex n) const {
  NodeSet seen = NodeSet::single(n);
  std::vector<NodeIndex> stack{n};
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (const auto& inc : incident(v)) {
      if (!seen.contains(inc.other)) {
        seen.insert(inc.other);
        stack.push_back(inc.other);
      }
    }
  }
  return seen;
}

std::string Graph::format(NodeSet s) const {
  std::vector<std::string> parts;
  for (NodeIndex n : s) parts.push_back(name(n));
  std::ranges::sort(parts);
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "}";
}

}  // namespace pathcov
