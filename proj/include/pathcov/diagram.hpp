#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pathcov/error.hpp"
#include "pathcov/graph.hpp"
#include "pathcov/scalar.hpp"

namespace pathcov {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Linear SEM in path-diagram form.
///
/// Each node carries the variance of its error term; directed edges carry
/// path coefficients and bidirected edges carry error covariances. Node and
/// edge indices are those of the underlying Graph.
template <typename Scalar>
class PathDiagram {
 public:
  using scalar_type = Scalar;

  NodeIndex add_node(std::string name, Scalar noise) {
    const NodeIndex n = graph_.add_node(std::move(name));
    noise_.push_back(std::move(noise));
    return n;
  }
  void add_edge(NodeIndex tail, NodeIndex head, Scalar coef) {
    graph_.add_directed(tail, head);
    coef_.push_back(std::move(coef));
  }
  void add_covariance(NodeIndex a, NodeIndex b, Scalar cov) {
    graph_.add_bidirected(a, b);
    errcov_.push_back(std::move(cov));
  }
  NodeIndex add_node(std::string_view name, const char* noise) {
    return add_node(std::string(name), convert(Rational::parse(noise)));
  }
  void add_edge(std::string_view tail, std::string_view head, const char* coef) {
    add_edge(graph_.index(tail), graph_.index(head), convert(Rational::parse(coef)));
  }
  void add_covariance(std::string_view a, std::string_view b, const char* cov) {
    add_covariance(graph_.index(a), graph_.index(b), convert(Rational::parse(cov)));
  }

  const Graph& graph() const { return graph_; }
  int size() const { return graph_.size(); }
  NodeIndex index(std::string_view name) const { return graph_.index(name); }
  const std::string& name(NodeIndex n) const { return graph_.name(n); }

  const Scalar& noise(NodeIndex n) const { return noise_.at(n); }
  const Scalar& coef(int directed_index) const { return coef_.at(directed_index); }
  const Scalar& errcov(int bidirected_index) const { return errcov_.at(bidirected_index); }
  const Scalar& value(EdgeRef e) const { return e.kind == EdgeKind::directed ? coef(e.index) : errcov(e.index); }

  void set_noise(NodeIndex n, Scalar v) { noise_.at(n) = std::move(v); }
  void set_coef(int directed_index, Scalar v) { coef_.at(directed_index) = std::move(v); }
  void set_errcov(int bidirected_index, Scalar v) { errcov_.at(bidirected_index) = std::move(v); }

  /// Error covariance matrix: noise variances on the diagonal.
  Matrix<Scalar> omega() const {
    const int n = size();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = noise_[i];
    for (std::size_t k = 0; k < errcov_.size(); ++k) {
      const auto& e = graph_.bidirected()[k];
      m(e.a, e.b) = errcov_[k];
      m(e.b, e.a) = errcov_[k];
    }
    return m;
  }

  /// B[i][j] = coefficient of j -> i.
  Matrix<Scalar> coefficients() const {
    const int n = size();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
    for (std::size_t k = 0; k < coef_.size(); ++k) {
      const auto& e = graph_.directed()[k];
      m(e.head, e.tail) = coef_[k];
    }
    return m;
  }

  template <typename T>
  PathDiagram<T> cast() const {
    PathDiagram<T> out;
    for (NodeIndex n = 0; n < size(); ++n) out.add_node(name(n), to<T>(noise_[n]));
    for (std::size_t k = 0; k < coef_.size(); ++k) {
      const auto& e = graph_.directed()[k];
      out.add_edge(e.tail, e.head, to<T>(coef_[k]));
    }
    for (std::size_t k = 0; k < errcov_.size(); ++k) {
      const auto& e = graph_.bidirected()[k];
      out.add_covariance(e.a, e.b, to<T>(errcov_[k]));
    }
    return out;
  }

 private:
  template <typename T>
  static T to(const Scalar& v) {
    if constexpr (std::is_same_v<T, Scalar>) {
      return v;
    } else if constexpr (std::is_same_v<T, double>) {
      return ScalarTraits<Scalar>::to_double(v);
    } else {
      static_assert(std::is_same_v<Scalar, Rational>, "only rational diagrams convert to other scalars");
      return ScalarTraits<T>::from_rational(v);
    }
  }
  static Scalar convert(const Rational& r) { return ScalarTraits<Scalar>::from_rational(r); }

  Graph graph_;
  std::vector<Scalar> noise_;
  std::vector<Scalar> coef_;
  std::vector<Scalar> errcov_;
};

struct ValidationReport {
  bool ok = true;
  bool singly_connected = true;
  std::vector<std::string> violations;
};

/// Leading principal minors of a symmetric matrix, computed by Gaussian
/// elimination without pivoting. Stops at the first non-positive pivot, so
/// the returned vector is shorter than the dimension exactly when the
/// matrix is not positive definite.
template <typename Scalar>
std::vector<Scalar> positive_pivots(Matrix<Scalar> m) {
  std::vector<Scalar> pivots;
  const Eigen::Index n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar p = m(k, k);
    if (sign_of(p) <= 0) break;
    pivots.push_back(p);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (is_zero(m(i, k))) continue;
      const Scalar f = m(i, k) / p;
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return pivots;
}

template <typename Scalar>
bool is_positive_definite(const Matrix<Scalar>& m) {
  return static_cast<Eigen::Index>(positive_pivots(m).size()) == m.rows();
}

template <typename Scalar>
ValidationReport validate(const PathDiagram<Scalar>& d) {
  ValidationReport r;
  const Graph& g = d.graph();
  r.singly_connected = g.singly_connected();
  if (!g.topological_order()) r.violations.push_back("directed edges form a cycle");
  for (NodeIndex n = 0; n < d.size(); ++n) {
    if (sign_of(d.noise(n)) <= 0) r.violations.push_back("noise variance of '" + d.name(n) + "' is not positive");
  }
  const auto pivots = positive_pivots(d.omega());
  if (static_cast<int>(pivots.size()) < d.size()) {
    r.violations.push_back("error covariance matrix is not positive definite (leading minor " +
                           std::to_string(pivots.size() + 1) + ")");
  }
  r.ok = r.violations.empty();
  return r;
}

/// Throws PreconditionError listing the violations when d is not valid.
template <typename Scalar>
void require_valid(const PathDiagram<Scalar>& d) {
  const auto r = validate(d);
  if (r.ok) return;
  std::string msg = "invalid diagram:";
  for (const auto& v : r.violations) msg += " " + v + ";";
  msg.pop_back();
  throw PreconditionError(msg);
}

}  // namespace pathcov
