#include "pathcov/factorization.hpp"

#include <algorithm>
#include <deque>

#include "pathcov/wright.hpp"

namespace pathcov {

namespace {

/// Unique skeleton path from a to b in a forest (first found otherwise).
std::optional<Path> skeleton_path(const Graph& g, NodeIndex a, NodeIndex b) {
  std::vector<int> prev(g.size(), -2);
  std::vector<Incidence> via(g.size());
  std::deque<NodeIndex> queue{a};
  prev[a] = -1;
  while (!queue.empty() && prev[b] == -2) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    for (const auto& inc : g.incident(v)) {
      if (prev[inc.other] != -2) continue;
      prev[inc.other] = v;
      via[inc.other] = inc;
      queue.push_back(inc.other);
    }
  }
  if (prev[b] == -2) return std::nullopt;
  Path p;
  for (int v = b; v != a; v = prev[v]) {
    p.nodes.push_back(v);
    p.steps.push_back({via[v].edge, via[v].head_there, via[v].head_here});
  }
  p.nodes.push_back(a);
  std::ranges::reverse(p.nodes);
  std::ranges::reverse(p.steps);
  return p;
}

enum class Attachment { upper, lower };

/// How the last step of p enters its final node: from a parent or spouse
/// (upper) or from a child (lower).
Attachment entry_of(const Path& p) {
  const Step& last = p.steps.back();
  return last.head_at_next ? Attachment::upper : Attachment::lower;
}

std::vector<NodeIndex> sorted_by_name(const Graph& g, NodeSet s) {
  auto v = s.to_vector();
  std::ranges::sort(v, {}, [&](NodeIndex n) -> const std::string& { return g.name(n); });
  return v;
}

template <typename Scalar>
Certificate<Scalar> shell(NodeIndex x, NodeIndex y, NodeSet z, CertificateKind kind) {
  Certificate<Scalar> c;
  c.kind = kind;
  c.x = x;
  c.y = y;
  c.given = z;
  return c;
}

template <typename Scalar>
Certificate<Scalar> collider_free_impl(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x,
                                       NodeIndex y, NodeSet z, const Path& path) {
  const auto part = classify_conditioners(d.graph(), path, z);
  auto c = shell<Scalar>(x, y, z, CertificateKind::collider_free);
  c.path = path;
  c.form = part.form;
  c.order = part.order;
  c.base_source = BaseSource::path_tracing;
  c.base = trace_covariance(d, sigma, x, y);
  c.factors = collider_free_factors(part);
  return c;
}

template <typename Scalar>
Certificate<Scalar> dispatch(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x, NodeIndex y,
                             NodeSet z, const std::vector<NodeIndex>* first_order);

/// A certificate as a sum of signed products; a non-sum is a single term.
template <typename Scalar>
std::vector<ExpansionTerm<Scalar>> as_terms(const Certificate<Scalar>& c) {
  if (c.kind == CertificateKind::collider_sum) return c.terms;
  ExpansionTerm<Scalar> t;
  t.covariances.push_back(c);
  return {t};
}

template <typename Scalar>
Certificate<Scalar> with_colliders_impl(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x,
                                        NodeIndex y, NodeSet z, const Path& path,
                                        const std::vector<NodeIndex>* first_order) {
  const Graph& g = d.graph();
  const auto plan = assign_openers(g, path, z, first_order);
  const OpenerAssignment& a = plan.colliders.front();
  NodeSet machinery;
  for (std::size_t i = 0; i < a.openers.size(); ++i) {
    machinery.insert(a.openers[i]);
    machinery |= a.upper[i] | a.lower[i];
  }
  const NodeSet rest = z - machinery;

  auto c = shell<Scalar>(x, y, z, CertificateKind::collider_sum);
  c.path = path;
  for (std::size_t i = 0; i < a.openers.size(); ++i) {
    NodeSet u = rest;
    for (std::size_t j = 0; j <= i; ++j) u |= a.upper[j];
    for (std::size_t j = 0; j < i; ++j) u |= a.lower[j] | NodeSet::single(a.openers[j]);
    const NodeIndex w = a.openers[i];
    const auto left = as_terms(dispatch(d, sigma, x, w, u, nullptr));
    const auto right = as_terms(dispatch(d, sigma, w, y, u, nullptr));
    for (const auto& l : left) {
      for (const auto& r : right) {
        ExpansionTerm<Scalar> t;
        t.sign = -l.sign * r.sign;
        t.openers = l.openers;
        t.openers.push_back(w);
        t.openers.insert(t.openers.end(), r.openers.begin(), r.openers.end());
        t.covariances = l.covariances;
        t.covariances.insert(t.covariances.end(), r.covariances.begin(), r.covariances.end());
        t.variances = l.variances;
        t.variances.push_back({w, u});
        t.variances.insert(t.variances.end(), r.variances.begin(), r.variances.end());
        c.terms.push_back(std::move(t));
      }
    }
  }
  return c;
}

template <typename Scalar>
Certificate<Scalar> dispatch(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x, NodeIndex y,
                             NodeSet z, const std::vector<NodeIndex>* first_order) {
  const Graph& g = d.graph();
  if (!g.singly_connected()) throw PreconditionError("factorization requires a singly-connected diagram");
  if (z.contains(x) || z.contains(y)) throw PreconditionError("query endpoints must not be conditioned on");
  const NodeSet comp = g.component(x);
  std::vector<std::string> notes;
  if (const NodeSet dropped = z - comp; !dropped.empty()) {
    notes.push_back("dropped conditioning nodes outside the component of " + g.name(x) + ": " + g.format(dropped));
    z &= comp;
  }
  Certificate<Scalar> c;
  if (x == y) {
    c = shell<Scalar>(x, y, z, CertificateKind::oracle_only);
    c.notes.push_back("partial variance; evaluated by the oracle");
  } else if (!comp.contains(y)) {
    c = shell<Scalar>(x, y, z, CertificateKind::disconnected);
  } else {
    const Path path = enumerate_paths(g, x, y).front();
    if (!is_path_open(g, path, z)) {
      c = shell<Scalar>(x, y, z, CertificateKind::closed);
      c.path = path;
    } else if (colliders_in(path).empty()) {
      c = collider_free_impl(d, sigma, x, y, z, path);
    } else {
      c = with_colliders_impl(d, sigma, x, y, z, path, first_order);
    }
  }
  c.notes.insert(c.notes.begin(), notes.begin(), notes.end());
  return c;
}

template <typename Scalar>
Path require_path(const PathDiagram<Scalar>& d, NodeIndex x, NodeIndex y, NodeSet z) {
  const Graph& g = d.graph();
  if (!g.singly_connected()) throw PreconditionError("factorization requires a singly-connected diagram");
  if (z.contains(x) || z.contains(y)) throw PreconditionError("query endpoints must not be conditioned on");
  if (x == y) throw PreconditionError("endpoints coincide");
  const auto paths = enumerate_paths(g, x, y);
  if (paths.empty()) throw PreconditionError(g.name(x) + " and " + g.name(y) + " are not connected");
  if (!is_path_open(g, paths.front(), z)) {
    throw ClosedPathError("path " + format_path(g, paths.front()) + " is closed given " + g.format(z));
  }
  return paths.front();
}

}  // namespace

std::pair<PathForm, std::vector<NodeIndex>> path_order(const Path& p) {
  std::size_t r = 0;
  PathForm form = PathForm::root;
  if (const auto root = path_root(p)) {
    r = static_cast<std::size_t>(std::ranges::find(p.nodes, *root) - p.nodes.begin());
  } else {
    const auto it = std::ranges::find_if(p.steps, [](const Step& s) { return s.edge.kind == EdgeKind::bidirected; });
    if (it == p.steps.end()) throw PreconditionError("path has neither a root nor a bidirected edge");
    r = static_cast<std::size_t>(it - p.steps.begin());
    form = PathForm::bidirected;
  }
  std::vector<NodeIndex> order;
  for (std::size_t k = r + 1; k-- > 0;) order.push_back(p.nodes[k]);
  for (std::size_t k = r + 1; k < p.nodes.size(); ++k) order.push_back(p.nodes[k]);
  return {form, order};
}

ConditionerPartition classify_conditioners(const Graph& g, const Path& path, NodeSet z) {
  if (!colliders_in(path).empty()) throw PreconditionError("path has colliders");
  if (z.contains(path.front()) || z.contains(path.back())) {
    throw PreconditionError("query endpoints must not be conditioned on");
  }
  const NodeSet on_path = path.node_set();
  if (const NodeSet hit = z & on_path; !hit.empty()) {
    throw ClosedPathError("conditioning on path node(s) " + g.format(hit) + " closes " + format_path(g, path));
  }
  ConditionerPartition part;
  part.path = path;
  std::tie(part.form, part.order) = path_order(path);
  part.upper.assign(part.order.size(), NodeSet{});
  part.lower.assign(part.order.size(), NodeSet{});
  for (NodeIndex w : z) {
    std::optional<Path> best;
    for (NodeIndex p : on_path) {
      auto sp = skeleton_path(g, w, p);
      if (sp && (sp->node_set() & on_path) == NodeSet::single(p)) {
        best = std::move(sp);
        break;
      }
    }
    if (!best) throw PreconditionError("'" + g.name(w) + "' is not connected to the path");
    const auto i = static_cast<std::size_t>(std::ranges::find(part.order, best->back()) - part.order.begin());
    (entry_of(*best) == Attachment::upper ? part.upper : part.lower)[i].insert(w);
  }
  return part;
}

std::vector<RatioFactor> collider_free_factors(const ConditionerPartition& part) {
  std::vector<RatioFactor> out;
  NodeSet prev;
  for (std::size_t i = 0; i < part.order.size(); ++i) {
    RatioFactor f;
    f.node = part.order[i];
    f.num = prev | part.upper[i] | part.lower[i];
    f.den = (i == 0 && part.form == PathForm::root) ? NodeSet{} : prev | part.upper[i];
    out.push_back(f);
    prev = f.num;
  }
  return out;
}

RatioFactor simplify_factor(const Graph& g, const RatioFactor& f) {
  const auto prune = [&](NodeSet r) {
    for (bool changed = true; changed;) {
      changed = false;
      for (NodeIndex i : sorted_by_name(g, r)) {
        if (d_separated(g, f.node, i, r - NodeSet::single(i))) {
          r.erase(i);
          changed = true;
        }
      }
    }
    return r;
  };
  return {f.node, prune(f.num), prune(f.den)};
}

OpenerPlan assign_openers(const Graph& g, const Path& path, NodeSet z, const std::vector<NodeIndex>* first_order) {
  OpenerPlan plan;
  const NodeSet on_path = path.node_set();
  NodeSet used;
  for (std::size_t k = 1; k + 1 < path.nodes.size(); ++k) {
    if (!path.collider_at(k)) continue;
    OpenerAssignment a;
    a.collider = path.nodes[k];
    const NodeSet ws = openers(g, a.collider, z);
    if (ws.empty()) throw ClosedPathError("collider '" + g.name(a.collider) + "' has no opener");
    if (plan.colliders.empty() && first_order) {
      if (NodeSet::of(*first_order) != ws || first_order->size() != static_cast<std::size_t>(ws.size())) {
        throw PreconditionError("opener order is not a permutation of the openers of '" + g.name(a.collider) + "'");
      }
      a.openers = *first_order;
    } else {
      a.openers = sorted_by_name(g, ws);
    }
    const NodeSet candidates = z - ws - on_path;
    for (NodeIndex w : a.openers) {
      a.chains.push_back(*opener_chain(g, a.collider, w, z));
      const NodeSet chain = a.chains.back().node_set();
      NodeSet up, lo;
      for (NodeIndex u : candidates) {
        const auto sp = skeleton_path(g, u, w);
        if (!sp) continue;
        const NodeSet inner = sp->node_set() - NodeSet::single(w);
        if (entry_of(*sp) == Attachment::upper) {
          if (!inner.intersects(on_path | chain)) up.insert(u);
        } else {
          lo.insert(u);
        }
      }
      a.upper.push_back(up);
      a.lower.push_back(lo);
      used |= up | lo | NodeSet::single(w);
    }
    plan.colliders.push_back(std::move(a));
  }
  plan.residual = z - used;
  return plan;
}

template <typename Scalar>
Certificate<Scalar> factorize_collider_free(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x,
                                            NodeIndex y, NodeSet z) {
  const Path path = require_path(d, x, y, z);
  if (!colliders_in(path).empty()) throw PreconditionError("path has colliders; use the collider expansion");
  return collider_free_impl(d, sigma, x, y, z, path);
}

template <typename Scalar>
Certificate<Scalar> factorize_with_colliders(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma,
                                             NodeIndex x, NodeIndex y, NodeSet z,
                                             const std::vector<NodeIndex>* first_order) {
  const Path path = require_path(d, x, y, z);
  if (colliders_in(path).empty()) throw PreconditionError("path has no colliders");
  return with_colliders_impl(d, sigma, x, y, z, path, first_order);
}

template <typename Scalar>
Certificate<Scalar> factorize(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x, NodeIndex y,
                              NodeSet z) {
  return dispatch(d, sigma, x, y, z, nullptr);
}

template <typename Scalar>
Scalar evaluate_certificate(const Certificate<Scalar>& c, PartialCovOracle<Scalar>& oracle) {
  switch (c.kind) {
    case CertificateKind::closed:
    case CertificateKind::disconnected:
      return Scalar(0);
    case CertificateKind::oracle_only:
      return oracle.cov(c.x, c.y, c.given);
    case CertificateKind::collider_free: {
      Scalar v = c.base;
      for (const auto& f : c.factors) {
        if (f.unit()) continue;
        const Scalar den = oracle.var(f.node, f.den);
        if (is_zero(den)) throw SingularError("zero partial variance in a ratio factor");
        v *= oracle.var(f.node, f.num) / den;
      }
      return v;
    }
    case CertificateKind::collider_sum: {
      Scalar total(0);
      for (const auto& t : c.terms) {
        Scalar v(t.sign);
        for (const auto& sub : t.covariances) v *= evaluate_certificate(sub, oracle);
        for (const auto& pv : t.variances) {
          const Scalar den = oracle.var(pv.node, pv.given);
          if (is_zero(den)) throw SingularError("zero partial variance of an opener");
          v /= den;
        }
        total += v;
      }
      return total;
    }
  }
  return Scalar(0);
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::collider_free: return "collider_free";
    case CertificateKind::collider_sum: return "collider_sum";
    case CertificateKind::closed: return "closed";
    case CertificateKind::disconnected: return "disconnected";
    case CertificateKind::oracle_only: return "oracle_only";
  }
  return "";
}

const char* to_string(PathForm f) {
  switch (f) {
    case PathForm::root: return "root";
    case PathForm::bidirected: return "bidirected";
    case PathForm::arrow_into: return "arrow_into";
  }
  return "";
}

#define PATHCOV_INSTANTIATE(S)                                                                                       \
  template Certificate<S> factorize_collider_free(const PathDiagram<S>&, const CovMatrix<S>&, NodeIndex, NodeIndex, \
                                                  NodeSet);                                                          \
  template Certificate<S> factorize_with_colliders(const PathDiagram<S>&, const CovMatrix<S>&, NodeIndex, NodeIndex, \
                                                   NodeSet, const std::vector<NodeIndex>*);                          \
  template Certificate<S> factorize(const PathDiagram<S>&, const CovMatrix<S>&, NodeIndex, NodeIndex, NodeSet);     \
  template S evaluate_certificate(const Certificate<S>&, PartialCovOracle<S>&);

PATHCOV_INSTANTIATE(Rational)
PATHCOV_INSTANTIATE(double)

#undef PATHCOV_INSTANTIATE

}  // namespace pathcov
