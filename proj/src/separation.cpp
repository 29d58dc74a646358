#include "pathcov/separation.hpp"

#include <algorithm>
#include <deque>

namespace pathcov {

namespace {

std::vector<Incidence> sorted_incidences(const Graph& g, NodeIndex v) {
  auto out = g.incident(v);
  std::ranges::sort(out, [&](const Incidence& a, const Incidence& b) {
    if (a.other != b.other) return g.name(a.other) < g.name(b.other);
    return a.edge.kind < b.edge.kind;
  });
  return out;
}

/// Reflexive ancestors of z: exactly the nodes with a descendant in z.
NodeSet ancestors_of(const Graph& g, NodeSet z) {
  NodeSet seen = z;
  std::vector<NodeIndex> stack = z.to_vector();
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex p : g.parents(v)) {
      if (!seen.contains(p)) {
        seen.insert(p);
        stack.push_back(p);
      }
    }
  }
  return seen;
}

Step step_of(const Incidence& inc) { return {inc.edge, inc.head_there, inc.head_here}; }

class PathSearch {
 public:
  PathSearch(const Graph& g, NodeIndex y, std::optional<NodeSet> z)
      : g_(g), y_(y), z_(z), open_colliders_(z ? ancestors_of(g, *z) : NodeSet{}) {
    for (NodeIndex v = 0; v < g.size(); ++v) adj_.push_back(sorted_incidences(g, v));
  }

  void run(NodeIndex x, bool stop_at_first) {
    stop_ = stop_at_first;
    current_.nodes = {x};
    current_.steps.clear();
    if (x == y_) {
      found_.push_back(current_);
      return;
    }
    extend(x, NodeSet::single(x));
  }

  std::vector<Path> found_;

 private:
  bool allowed(NodeIndex v, const Step& in, const Step& out) const {
    if (!z_) return true;
    if (in.head_at_next && out.head_at_prev) return open_colliders_.contains(v);
    return !z_->contains(v);
  }

  void extend(NodeIndex v, NodeSet visited) {
    for (const auto& inc : adj_[v]) {
      if (stop_ && !found_.empty()) return;
      if (visited.contains(inc.other)) continue;
      const Step s = step_of(inc);
      if (!current_.steps.empty() && !allowed(v, current_.steps.back(), s)) continue;
      current_.nodes.push_back(inc.other);
      current_.steps.push_back(s);
      if (inc.other == y_) {
        found_.push_back(current_);
      } else {
        NodeSet next = visited;
        next.insert(inc.other);
        extend(inc.other, next);
      }
      current_.nodes.pop_back();
      current_.steps.pop_back();
    }
  }

  const Graph& g_;
  NodeIndex y_;
  std::optional<NodeSet> z_;
  NodeSet open_colliders_;
  std::vector<std::vector<Incidence>> adj_;
  Path current_;
  bool stop_ = false;
};

}  // namespace

Path Path::reversed() const {
  Path r;
  r.nodes.assign(nodes.rbegin(), nodes.rend());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) r.steps.push_back({it->edge, it->head_at_prev, it->head_at_next});
  return r;
}

Path Path::slice(std::size_t from, std::size_t to) const {
  if (from > to) return reversed().slice(nodes.size() - 1 - from, nodes.size() - 1 - to);
  Path r;
  r.nodes.assign(nodes.begin() + static_cast<std::ptrdiff_t>(from), nodes.begin() + static_cast<std::ptrdiff_t>(to) + 1);
  r.steps.assign(steps.begin() + static_cast<std::ptrdiff_t>(from), steps.begin() + static_cast<std::ptrdiff_t>(to));
  return r;
}

std::vector<Path> enumerate_paths(const Graph& g, NodeIndex x, NodeIndex y) {
  PathSearch s(g, y, std::nullopt);
  s.run(x, false);
  return std::move(s.found_);
}

NodeSet colliders_in(const Path& p) {
  NodeSet out;
  for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
    if (p.collider_at(k)) out.insert(p.nodes[k]);
  }
  return out;
}

bool is_path_open(const Graph& g, const Path& p, NodeSet z) {
  for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
    const NodeIndex v = p.nodes[k];
    if (p.collider_at(k)) {
      if (!g.descendants(v).intersects(z)) return false;
    } else if (z.contains(v)) {
      return false;
    }
  }
  return true;
}

bool is_route_open(const Path& r, NodeSet z) {
  for (std::size_t k = 1; k + 1 < r.nodes.size(); ++k) {
    if (r.collider_at(k) != z.contains(r.nodes[k])) return false;
  }
  return true;
}

std::optional<Path> open_path(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z) {
  PathSearch s(g, y, z);
  s.run(x, true);
  if (s.found_.empty()) return std::nullopt;
  return s.found_.front();
}

bool d_connected(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z) { return open_path(g, x, y, z).has_value(); }

int route_bound(const Graph& g) {
  return 2 * static_cast<int>(g.directed().size() + g.bidirected().size()) + 1;
}

std::optional<Route> open_route(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z) {
  return open_route(g, x, y, z, route_bound(g));
}

std::optional<Route> open_route(const Graph& g, NodeIndex x, NodeIndex y, NodeSet z, int max_nodes) {
  if (x == y) return Route{{x}, {}};
  // State s = 2 * node + (arrived with a head); the start state has no arrival.
  const int states = 2 * g.size();
  std::vector<int> prev(states, -2);
  std::vector<Incidence> via(states);
  std::vector<int> depth(states, 0);
  std::deque<int> queue;
  const auto expand = [&](NodeIndex v, std::optional<bool> head_in, int from, int d) -> std::optional<int> {
    for (const auto& inc : sorted_incidences(g, v)) {
      if (head_in) {
        const bool collider = *head_in && inc.head_here;
        if (collider != z.contains(v)) continue;
      }
      const int s = 2 * inc.other + (inc.head_there ? 1 : 0);
      if (prev[s] != -2) continue;
      prev[s] = from;
      via[s] = inc;
      depth[s] = d + 1;
      if (inc.other == y) return s;
      queue.push_back(s);
    }
    return std::nullopt;
  };
  std::optional<int> hit = expand(x, std::nullopt, -1, 1);
  while (!hit && !queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    if (depth[s] >= max_nodes) continue;
    hit = expand(s / 2, (s % 2) == 1, s, depth[s]);
  }
  if (!hit) return std::nullopt;
  Route r;
  for (int s = *hit; s != -1; s = prev[s]) {
    r.nodes.push_back(s / 2);
    r.steps.push_back(step_of(via[s]));
  }
  r.nodes.push_back(x);
  std::ranges::reverse(r.nodes);
  std::ranges::reverse(r.steps);
  return r;
}

NodeSet openers(const Graph& g, NodeIndex c, NodeSet z) {
  if (z.contains(c)) return NodeSet::single(c);
  NodeSet out;
  NodeSet seen = NodeSet::single(c);
  std::vector<NodeIndex> stack{c};
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex ch : g.children(v)) {
      if (seen.contains(ch)) continue;
      seen.insert(ch);
      if (z.contains(ch)) {
        out.insert(ch);
      } else {
        stack.push_back(ch);
      }
    }
  }
  return out;
}

std::optional<Path> opener_chain(const Graph& g, NodeIndex c, NodeIndex w, NodeSet z) {
  if (c == w) return Path{{c}, {}};
  std::vector<int> prev(g.size(), -2);
  std::vector<Incidence> via(g.size());
  std::deque<NodeIndex> queue{c};
  prev[c] = -1;
  while (!queue.empty()) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    if (v != c && z.contains(v)) continue;
    for (const auto& inc : sorted_incidences(g, v)) {
      if (inc.edge.kind != EdgeKind::directed || !inc.head_there || prev[inc.other] != -2) continue;
      prev[inc.other] = v;
      via[inc.other] = inc;
      queue.push_back(inc.other);
    }
  }
  if (prev[w] == -2) return std::nullopt;
  Path p;
  for (int v = w; v != c; v = prev[v]) {
    p.nodes.push_back(v);
    p.steps.push_back(step_of(via[v]));
  }
  p.nodes.push_back(c);
  std::ranges::reverse(p.nodes);
  std::ranges::reverse(p.steps);
  return p;
}

std::string format_path(const Graph& g, const Path& p) {
  std::string out = g.name(p.nodes.front());
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const Step& s = p.steps[k];
    if (s.edge.kind == EdgeKind::bidirected) {
      out += " <-> ";
    } else {
      out += s.head_at_next ? " -> " : " <- ";
    }
    out += g.name(p.nodes[k + 1]);
  }
  return out;
}

}  // namespace pathcov
