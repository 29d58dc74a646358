#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathcov/sem_algebra.hpp"
#include "pathcov/separation.hpp"

namespace pathcov {

enum class CertificateKind { collider_free, collider_sum, closed, disconnected, oracle_only };
enum class BaseSource { path_tracing, marginal };

/// Shape of a collider-free path around its first node X_1.
///   root:       X_m <- ... <- X_1 -> ... -> X_{m+n}
///   bidirected: X_m <- ... <- X_1 <-> X_{m+1} -> ... -> X_{m+n}
///   arrow_into: *-> X_1 -> ... -> X_{m+n} (only inside a larger diagram)
enum class PathForm { root, bidirected, arrow_into };

/// sigma^2_{node.num} / sigma^2_{node.den}, with den a subset of num.
struct RatioFactor {
  NodeIndex node = 0;
  NodeSet num;
  NodeSet den;
  bool unit() const { return num == den; }
};

struct PartialVariance {
  NodeIndex node = 0;
  NodeSet given;
};

template <typename Scalar>
struct Certificate;

/// sign * prod(covariances) / prod(variances).
template <typename Scalar>
struct ExpansionTerm {
  int sign = 1;
  std::vector<NodeIndex> openers;
  std::vector<Certificate<Scalar>> covariances;
  std::vector<PartialVariance> variances;
};

/// Machine-checkable decomposition of sigma_{xy.given}.
template <typename Scalar>
struct Certificate {
  CertificateKind kind = CertificateKind::oracle_only;
  NodeIndex x = 0;
  NodeIndex y = 0;
  NodeSet given;
  std::optional<Path> path;
  PathForm form = PathForm::root;
  std::vector<NodeIndex> order;  // X_1 ... X_{m+n}
  BaseSource base_source = BaseSource::path_tracing;
  Scalar base = Scalar(0);
  std::vector<RatioFactor> factors;
  std::vector<ExpansionTerm<Scalar>> terms;
  std::vector<std::string> notes;
};

/// Conditioning nodes split by where they attach to a collider-free path.
/// upper[i] / lower[i] belong to order[i] (X_{i+1}): upper attaches through
/// a parent or spouse, lower through a child.
struct ConditionerPartition {
  Path path;
  PathForm form = PathForm::root;
  std::vector<NodeIndex> order;
  std::vector<NodeSet> upper;
  std::vector<NodeSet> lower;
};

/// X_1 ... X_{m+n} of a collider-free path: the root (or the X-side end of
/// its bidirected edge), then the X-side branch outward, then the Y side.
std::pair<PathForm, std::vector<NodeIndex>> path_order(const Path& p);

ConditionerPartition classify_conditioners(const Graph& g, const Path& path, NodeSet z);

/// Theorem 1 and 2 factors for a partition.
std::vector<RatioFactor> collider_free_factors(const ConditionerPartition& part);

/// Drops conditioning nodes that are d-separated from the factor's node
/// given the rest of the set, in numerator and denominator separately.
RatioFactor simplify_factor(const Graph& g, const RatioFactor& f);

struct OpenerAssignment {
  NodeIndex collider = 0;
  std::vector<NodeIndex> openers;
  std::vector<Path> chains;    // collider -> ... -> opener
  std::vector<NodeSet> upper;  // attached to Pa or Sp of each opener
  std::vector<NodeSet> lower;  // attached to Ch of each opener
};

struct OpenerPlan {
  std::vector<OpenerAssignment> colliders;  // in path order from x
  NodeSet residual;
};

/// Openers of each collider of a z-open path, sorted by name unless an
/// explicit order for the first collider is given.
OpenerPlan assign_openers(const Graph& g, const Path& path, NodeSet z,
                          const std::vector<NodeIndex>* first_order = nullptr);

template <typename Scalar>
Certificate<Scalar> factorize_collider_free(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x,
                                            NodeIndex y, NodeSet z);

template <typename Scalar>
Certificate<Scalar> factorize_with_colliders(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma,
                                             NodeIndex x, NodeIndex y, NodeSet z,
                                             const std::vector<NodeIndex>* first_order = nullptr);

/// Dispatches on the shape of the unique x-y path. Conditioning nodes in
/// other components are dropped with a note.
template <typename Scalar>
Certificate<Scalar> factorize(const PathDiagram<Scalar>& d, const CovMatrix<Scalar>& sigma, NodeIndex x, NodeIndex y,
                              NodeSet z);

template <typename Scalar>
Scalar evaluate_certificate(const Certificate<Scalar>& c, PartialCovOracle<Scalar>& oracle);

template <typename Scalar>
Scalar evaluate_certificate(const Certificate<Scalar>& c, const CovMatrix<Scalar>& sigma) {
  PartialCovOracle<Scalar> oracle(sigma);
  return evaluate_certificate(c, oracle);
}

const char* to_string(CertificateKind k);
const char* to_string(PathForm f);

}  // namespace pathcov
