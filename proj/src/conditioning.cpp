#include "pathcov/conditioning.hpp"
#include "pathcov/wright.hpp"

#include <algorithm>
#include <deque>

namespace pathcov {

namespace {

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

std::vector<NodeIndex> sorted_by_name(const Graph& g, NodeSet s) {
  auto v = s.to_vector();
  std::ranges::sort(v, {}, [&](NodeIndex n) -> const std::string& { return g.name(n); });
  return v;
}

/// Position of n in p, or npos.
std::size_t position(const Path& p, NodeIndex n) {
  const auto it = std::ranges::find(p.nodes, n);
  return it == p.nodes.end() ? std::string::npos : static_cast<std::size_t>(it - p.nodes.begin());
}

bool same_step(const Step& a, const Step& b) {
  return a.edge == b.edge && a.head_at_next == b.head_at_next && a.head_at_prev == b.head_at_prev;
}

/// Common run of all paths leaving position pos[i] in direction dir (+1 toward
/// y, -1 toward x). Returns the extra nodes beyond the start.
std::vector<NodeIndex> common_run(const std::vector<Path>& paths, std::vector<std::size_t> pos, int dir,
                                  bool directed_only) {
  std::vector<NodeIndex> out;
  while (true) {
    std::optional<Step> step;
    std::optional<NodeIndex> next;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const Path& p = paths[i];
      if (dir > 0 ? pos[i] + 1 >= p.nodes.size() : pos[i] == 0) return out;
      const std::size_t q = dir > 0 ? pos[i] + 1 : pos[i] - 1;
      Step s = dir > 0 ? p.steps[pos[i]] : Step{p.steps[q].edge, p.steps[q].head_at_prev, p.steps[q].head_at_next};
      if (directed_only && (s.edge.kind != EdgeKind::directed || !s.head_at_next)) return out;
      if (!step) {
        step = s;
        next = p.nodes[q];
      } else if (!same_step(*step, s) || *next != p.nodes[q]) {
        return out;
      }
    }
    out.push_back(*next);
    for (auto& k : pos) k = dir > 0 ? k + 1 : k - 1;
  }
}

struct Subpath {
  PathForm form = PathForm::root;
  std::vector<NodeIndex> order;
};

std::vector<Subpath> root_candidates(const std::vector<Path>& paths) {
  const auto r0 = path_root(paths.front());
  if (!r0) return {};
  std::vector<std::size_t> pos;
  for (const auto& p : paths) {
    const auto r = path_root(p);
    if (!r || *r != *r0) return {};
    pos.push_back(position(p, *r));
  }
  Subpath s{PathForm::root, {*r0}};
  for (NodeIndex n : common_run(paths, pos, -1, false)) s.order.push_back(n);
  for (NodeIndex n : common_run(paths, pos, +1, false)) s.order.push_back(n);
  return {s};
}

std::vector<Subpath> nonroot_candidates(const std::vector<Path>& paths) {
  std::vector<Subpath> out;
  const Path& first = paths.front();
  // A bidirected edge shared, with the same orientation, by every path.
  for (std::size_t k = 0; k < first.steps.size(); ++k) {
    if (first.steps[k].edge.kind != EdgeKind::bidirected) continue;
    const NodeIndex a = first.nodes[k];
    std::vector<std::size_t> pos;
    bool shared = true;
    for (const auto& p : paths) {
      const std::size_t i = position(p, a);
      if (i == std::string::npos || i + 1 >= p.nodes.size() || !(p.steps[i].edge == first.steps[k].edge)) {
        shared = false;
        break;
      }
      pos.push_back(i);
    }
    if (!shared) continue;
    Subpath s{PathForm::bidirected, {a}};
    for (NodeIndex n : common_run(paths, pos, -1, false)) s.order.push_back(n);
    s.order.push_back(first.nodes[k + 1]);
    for (auto& i : pos) ++i;
    for (NodeIndex n : common_run(paths, pos, +1, false)) s.order.push_back(n);
    out.push_back(s);
  }
  // A node entered with an arrowhead in every path and left by a directed
  // edge (or ending the path), candidates ordered by distance from x.
  for (std::size_t k = 1; k < first.nodes.size(); ++k) {
    const NodeIndex v = first.nodes[k];
    std::vector<std::size_t> pos;
    bool ok = true;
    for (const auto& p : paths) {
      const std::size_t i = position(p, v);
      if (i == std::string::npos || i == 0 || !p.steps[i - 1].head_at_next) {
        ok = false;
        break;
      }
      if (i + 1 < p.nodes.size() && (p.steps[i].edge.kind != EdgeKind::directed || !p.steps[i].head_at_next)) {
        ok = false;
        break;
      }
      pos.push_back(i);
    }
    if (!ok) continue;
    Subpath s{PathForm::arrow_into, {v}};
    for (NodeIndex n : common_run(paths, pos, +1, true)) s.order.push_back(n);
    out.push_back(s);
  }
  return out;
}

/// Is w connected to xi by a k-open path that starts at xi through the
/// given kind of neighbour and avoids the forbidden nodes?
class AttachSearch {
 public:
  AttachSearch(const Graph& g, NodeSet k, NodeSet forbidden)
      : g_(g), k_(k), open_colliders_(ancestors_of(g, k)), forbidden_(forbidden) {}

  bool connected(NodeIndex xi, NodeIndex w, bool through_parents) {
    target_ = w;
    for (const auto& inc : g_.incident(xi)) {
      const bool upper = inc.head_here;  // parent or spouse of xi
      const bool lower = inc.edge.kind == EdgeKind::directed && inc.head_there;
      if (through_parents ? !upper : !lower) continue;
      if (forbidden_.contains(inc.other)) continue;
      if (inc.other == w) return true;
      if (walk(inc.other, inc.head_there, NodeSet{xi, inc.other})) return true;
    }
    return false;
  }

 private:
  bool walk(NodeIndex v, bool head_in, NodeSet visited) {
    for (const auto& inc : g_.incident(v)) {
      if (visited.contains(inc.other) || forbidden_.contains(inc.other)) continue;
      const bool collider = head_in && inc.head_here;
      if (collider ? !open_colliders_.contains(v) : k_.contains(v)) continue;
      if (inc.other == target_) return true;
      NodeSet next = visited;
      next.insert(inc.other);
      if (walk(inc.other, inc.head_there, next)) return true;
    }
    return false;
  }

  const Graph& g_;
  NodeSet k_;
  NodeSet open_colliders_;
  NodeSet forbidden_;
  NodeIndex target_ = 0;
};

/// Z-open route xi -> A ... B *-> xi that does not pass through xi in
/// between, searched over (node, arrived with head) states up to the route
/// bound.
bool has_returning_route(const Graph& g, NodeIndex xi, NodeSet z) {
  const int bound = route_bound(g);
  std::vector<int> depth(2 * g.size(), -1);
  std::deque<int> queue;
  for (NodeIndex c : g.children(xi)) {
    if (depth[2 * c + 1] < 0) {
      depth[2 * c + 1] = 2;
      queue.push_back(2 * c + 1);
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    const NodeIndex v = s / 2;
    const bool head_in = s % 2 == 1;
    if (depth[s] >= bound) continue;
    for (const auto& inc : g.incident(v)) {
      const bool collider = head_in && inc.head_here;
      if (collider != z.contains(v)) continue;
      if (inc.other == xi) {
        if (inc.head_there) return true;
        continue;
      }
      const int t = 2 * inc.other + (inc.head_there ? 1 : 0);
      if (depth[t] >= 0) continue;
      depth[t] = depth[s] + 1;
      queue.push_back(t);
    }
  }
  return false;
}

std::optional<std::string> build_plan(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y, const Subpath& sub,
                                      NodeSet pi_nodes, ConditionedPlan& plan) {
  for (std::size_t i = 1; i < sub.order.size(); ++i) {
    if (has_returning_route(g, sub.order[i], z)) {
      return "open route from " + g.name(sub.order[i]) + " back into itself";
    }
  }
  plan.form = sub.form;
  plan.order = sub.order;
  plan.upper.clear();
  plan.lower.clear();
  NodeSet assigned;
  for (NodeIndex xi : sub.order) {
    const NodeSet forbidden = pi_nodes - NodeSet::single(xi);
    const auto grow = [&](NodeSet base, bool through_parents) {
      NodeSet chosen;
      for (bool added = true; added;) {
        added = false;
        AttachSearch search(g, base | chosen, forbidden);
        for (NodeIndex w : sorted_by_name(g, z - base - chosen)) {
          if (search.connected(xi, w, through_parents)) {
            chosen.insert(w);
            added = true;
            break;
          }
        }
      }
      return chosen;
    };
    const NodeSet up = grow(assigned, true);
    const NodeSet lo = grow(assigned | up, false);
    plan.upper.push_back(up);
    plan.lower.push_back(lo);
    assigned |= up | lo;
  }
  plan.residual = sorted_by_name(g, z - assigned);
  NodeSet k = assigned;
  for (NodeIndex w : plan.residual) {
    if (!d_separated(g, x, w, k) && !d_separated(g, y, w, k)) {
      return "leftover node " + g.name(w) + " is connected to both endpoints given " + g.format(k);
    }
    k.insert(w);
  }
  return std::nullopt;
}

PlanCheck check(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y, SubpathKind kind) {
  PlanCheck out;
  if (z.contains(x) || z.contains(y)) {
    out.failure = "endpoints are in the conditioning set";
    return out;
  }
  std::vector<Path> open;
  for (auto& p : enumerate_paths(g, x, y)) {
    if (is_path_open(g, p, z)) open.push_back(std::move(p));
  }
  if (open.empty()) {
    out.failure = "no open path between " + g.name(x) + " and " + g.name(y);
    return out;
  }
  NodeSet pi_nodes;
  for (const auto& p : open) {
    if (!colliders_in(p).empty()) {
      out.failure = "open path " + format_path(g, p) + " has a collider";
      return out;
    }
    pi_nodes |= p.node_set();
  }
  for (bool swapped : {false, true}) {
    std::vector<Path> paths = open;
    if (swapped) {
      for (auto& p : paths) p = p.reversed();
    }
    const auto candidates = kind == SubpathKind::root ? root_candidates(paths) : nonroot_candidates(paths);
    for (const auto& sub : candidates) {
      ConditionedPlan plan;
      plan.kind = kind;
      plan.x = swapped ? y : x;
      plan.y = swapped ? x : y;
      plan.swapped = swapped;
      plan.open_paths = paths;
      if (auto why = build_plan(g, z, x, y, sub, pi_nodes, plan)) {
        if (out.failure.empty()) out.failure = *why;
        continue;
      }
      out.plan = std::move(plan);
      out.failure.clear();
      return out;
    }
  }
  if (out.failure.empty()) {
    out.failure = kind == SubpathKind::root ? "open paths share no common root" : "open paths share no bidirected edge or arrow-entered node";
  }
  return out;
}

}  // namespace

std::string split_node_name(const Graph& g, const std::string& a, const std::string& b) {
  std::string name = a + "__to__" + b;
  for (int k = 2; g.find(name); ++k) name = a + "__to__" + b + "__" + std::to_string(k);
  return name;
}

PlanCheck check_root_form(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y) {
  return check(g, z, x, y, SubpathKind::root);
}

PlanCheck check_nonroot_form(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y) {
  return check(g, z, x, y, SubpathKind::nonroot);
}

}  // namespace pathcov
