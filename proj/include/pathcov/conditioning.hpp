#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathcov/factorization.hpp"

namespace pathcov {

/// Diagram after node splitting: every edge A -> B with A in s is replaced
/// by A_B -> B, where A_B is a new parentless node named "A__to__B".
/// Original nodes keep their indices; created nodes are appended.
template <typename Scalar>
struct ConditionedDiagram {
  PathDiagram<Scalar> diagram;
  NodeSet s;
  NodeSet s_prime;
  std::map<NodeIndex, NodeSet> split;

  NodeSet z() const { return s | s_prime; }
};

std::string split_node_name(const Graph& g, const std::string& a, const std::string& b);

template <typename Scalar>
ConditionedDiagram<Scalar> condition_on(const PathDiagram<Scalar>& d, NodeSet s, const Scalar& new_noise = Scalar(1)) {
  const Graph& g = d.graph();
  ConditionedDiagram<Scalar> out;
  out.s = s;
  auto& nd = out.diagram;
  for (NodeIndex n = 0; n < d.size(); ++n) nd.add_node(g.name(n), d.noise(n));
  for (std::size_t k = 0; k < g.directed().size(); ++k) {
    const auto& e = g.directed()[k];
    const Scalar& c = d.coef(static_cast<int>(k));
    if (!s.contains(e.tail)) {
      nd.add_edge(e.tail, e.head, c);
      continue;
    }
    const NodeIndex created = nd.add_node(split_node_name(nd.graph(), g.name(e.tail), g.name(e.head)), new_noise);
    nd.add_edge(created, e.head, c);
    out.s_prime.insert(created);
    out.split[e.tail].insert(created);
  }
  for (std::size_t k = 0; k < g.bidirected().size(); ++k) {
    const auto& e = g.bidirected()[k];
    nd.add_covariance(e.a, e.b, d.errcov(static_cast<int>(k)));
  }
  return out;
}

template <typename Scalar>
struct ConsistencyResult {
  bool equal = false;
  Scalar original;     // sigma_{xy.S} on the original diagram
  Scalar conditioned;  // sigma_{xy.SS'} on the conditioned diagram
};

template <typename Scalar>
ConsistencyResult<Scalar> conditioning_consistency(const PathDiagram<Scalar>& d, NodeSet s, NodeIndex x, NodeIndex y,
                                                   const Scalar& new_noise = Scalar(1)) {
  const auto dc = condition_on(d, s, new_noise);
  ConsistencyResult<Scalar> r;
  r.original = partial_cov_schur(implied_covariance(d), x, y, s);
  r.conditioned = partial_cov_schur(implied_covariance(dc.diagram), x, y, dc.z());
  if constexpr (ScalarTraits<Scalar>::exact) {
    r.equal = r.original == r.conditioned;
  } else {
    using std::abs;
    r.equal = abs(r.original - r.conditioned) <= 1e-9 * (1.0 + abs(r.original));
  }
  return r;
}

enum class SubpathKind { root, nonroot };

/// Hypotheses of the conditioned-diagram factorizations, as verified.
/// The root kind needs every open path to share a subpath around a common
/// root; the non-root kind a shared bidirected edge or a shared node entered
/// with an arrowhead and left by a directed edge.
/// order/upper/lower follow the indexing X_1 ... X_{m+n}; when the
/// subpath form only matches with the endpoints exchanged, swapped is set
/// and open_paths run from y to x.
struct ConditionedPlan {
  SubpathKind kind = SubpathKind::root;
  PathForm form = PathForm::root;
  NodeIndex x = 0;
  NodeIndex y = 0;
  bool swapped = false;
  std::vector<Path> open_paths;
  std::vector<NodeIndex> order;
  std::vector<NodeSet> upper;
  std::vector<NodeSet> lower;
  std::vector<NodeIndex> residual;
};

struct PlanCheck {
  std::optional<ConditionedPlan> plan;
  std::string failure;
};

PlanCheck check_root_form(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y);
PlanCheck check_nonroot_form(const Graph& g, NodeSet z, NodeIndex x, NodeIndex y);

template <typename Scalar>
PlanCheck check_root_form(const ConditionedDiagram<Scalar>& dc, NodeIndex x, NodeIndex y) {
  return check_root_form(dc.diagram.graph(), dc.z(), x, y);
}

template <typename Scalar>
PlanCheck check_nonroot_form(const ConditionedDiagram<Scalar>& dc, NodeIndex x, NodeIndex y) {
  return check_nonroot_form(dc.diagram.graph(), dc.z(), x, y);
}

/// Base sigma_xy from the marginal covariance and one ratio factor per
/// subpath node: sigma^2_{X_i.Z^{1:i}_{1:i}} / sigma^2_{X_i.Z^{1:i}_{1:i-1}}.
template <typename Scalar>
Certificate<Scalar> factorize_conditioned(const ConditionedDiagram<Scalar>& dc, const CovMatrix<Scalar>& sigma,
                                          const ConditionedPlan& plan) {
  if (sigma.size() != dc.diagram.size() || plan.upper.size() != plan.order.size() ||
      plan.lower.size() != plan.order.size()) {
    throw PreconditionError("plan does not match the conditioned diagram");
  }
  for (NodeIndex n : plan.order) {
    if (n < 0 || n >= dc.diagram.size()) throw PreconditionError("plan does not match the conditioned diagram");
  }
  ConditionerPartition part;
  part.form = plan.form;
  part.order = plan.order;
  part.upper = plan.upper;
  part.lower = plan.lower;
  Certificate<Scalar> c;
  c.kind = CertificateKind::collider_free;
  c.x = plan.x;
  c.y = plan.y;
  c.given = dc.z();
  c.form = plan.form;
  c.order = plan.order;
  c.base_source = BaseSource::marginal;
  c.base = sigma(plan.x, plan.y);
  c.factors = collider_free_factors(part);
  c.notes.push_back(plan.kind == SubpathKind::root ? "shared root subpath" : "shared non-root subpath");
  return c;
}

}  // namespace pathcov
