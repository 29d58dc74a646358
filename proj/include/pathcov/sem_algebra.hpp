#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/LU>

#include "pathcov/diagram.hpp"

namespace pathcov {

/// Symmetric covariance matrix with the node names of its rows.
template <typename Scalar>
struct CovMatrix {
  std::vector<std::string> order;
  Matrix<Scalar> entries;

  int size() const { return static_cast<int>(order.size()); }
  const Scalar& operator()(NodeIndex i, NodeIndex j) const { return entries(i, j); }
};

/// Sigma = (I - B)^-1 Omega (I - B)^-T, with (I - B)^-1 built row by row in
/// topological order.
template <typename Scalar>
CovMatrix<Scalar> implied_covariance(const PathDiagram<Scalar>& d) {
  require_valid(d);
  const Graph& g = d.graph();
  const int n = d.size();
  Matrix<Scalar> total = Matrix<Scalar>::Zero(n, n);
  const auto order = g.topological_order();
  for (NodeIndex v : *order) {
    total(v, v) = Scalar(1);
    for (const auto& inc : g.incident(v)) {
      if (inc.edge.kind != EdgeKind::directed || !inc.head_here) continue;
      const Scalar& c = d.coef(inc.edge.index);
      for (int j = 0; j < n; ++j) {
        if (!is_zero(total(inc.other, j))) total(v, j) += c * total(inc.other, j);
      }
    }
  }
  CovMatrix<Scalar> out{g.names(), total * d.omega() * total.transpose()};
  return out;
}

namespace detail {

/// Solves a x = b. Rational: exact elimination, first nonzero pivot.
/// Double: partial-pivot LU, pivots at or below 1e-12 count as singular.
template <typename Scalar>
Vector<Scalar> solve(Matrix<Scalar> a, Vector<Scalar> b) {
  const Eigen::Index n = a.rows();
  if constexpr (ScalarTraits<Scalar>::exact) {
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index p = k;
      while (p < n && is_zero(a(p, k))) ++p;
      if (p == n) throw SingularError("singular conditioning covariance block");
      if (p != k) {
        a.row(p).swap(a.row(k));
        std::swap(b(p), b(k));
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (is_zero(a(i, k))) continue;
        const Scalar f = a(i, k) / a(k, k);
        for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        b(i) -= f * b(k);
      }
    }
    Vector<Scalar> x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Scalar s = b(i);
      for (Eigen::Index j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
      x(i) = s / a(i, i);
    }
    return x;
  } else {
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
    const auto& m = lu.matrixLU();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (is_zero(m(k, k))) throw SingularError("singular conditioning covariance block");
    }
    return lu.solve(b);
  }
}

}  // namespace detail

/// sigma_{xy.Z} = Sigma_xy - Sigma_xZ Sigma_ZZ^-1 Sigma_Zy.
template <typename Scalar>
Scalar partial_cov_schur(const CovMatrix<Scalar>& s, NodeIndex x, NodeIndex y, NodeSet z) {
  if (z.contains(x) || z.contains(y)) throw PreconditionError("query endpoints must not be conditioned on");
  if (z.empty()) return s(x, y);
  const auto idx = z.to_vector();
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix<Scalar> szz(k, k);
  Vector<Scalar> szy(k);
  Vector<Scalar> sxz(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) szz(i, j) = s(idx[i], idx[j]);
    szy(i) = s(idx[i], y);
    sxz(i) = s(x, idx[i]);
  }
  const Vector<Scalar> a = detail::solve<Scalar>(szz, szy);
  Scalar out = s(x, y);
  for (Eigen::Index i = 0; i < k; ++i) out -= sxz(i) * a(i);
  return out;
}

/// The recursion sigma_{XY.ZW} = sigma_{XY.Z} - sigma_{XW.Z} sigma_{WY.Z} / sigma^2_{W.Z},
/// applied to the conditioning nodes in the given order.
template <typename Scalar>
Scalar partial_cov_recursive(const CovMatrix<Scalar>& s, NodeIndex x, NodeIndex y,
                             const std::vector<NodeIndex>& order) {
  for (NodeIndex w : order) {
    if (w == x || w == y) throw PreconditionError("query endpoints must not be conditioned on");
  }
  std::vector<NodeIndex> idx{x, y};
  idx.insert(idx.end(), order.begin(), order.end());
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix<Scalar> m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = s(idx[i], idx[j]);
  }
  for (Eigen::Index w = 2; w < k; ++w) {
    const Scalar pivot = m(w, w);
    if (is_zero(pivot)) {
      throw SingularError("zero partial variance of '" + s.order.at(idx[w]) + "' given the preceding nodes");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i == w || is_zero(m(i, w))) continue;
      const Scalar f = m(i, w) / pivot;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (j != w) m(i, j) -= f * m(w, j);
      }
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      m(i, w) = Scalar(0);
      m(w, i) = Scalar(0);
    }
  }
  return m(0, 1);
}

template <typename Scalar>
Scalar partial_cov_recursive(const CovMatrix<Scalar>& s, NodeIndex x, NodeIndex y, NodeSet z) {
  return partial_cov_recursive(s, x, y, z.to_vector());
}

/// r_{yx.z} = sigma_{xy.z} / sigma^2_{x.z}.
template <typename Scalar>
Scalar regression_coef(const CovMatrix<Scalar>& s, NodeIndex y, NodeIndex x, NodeSet z) {
  const Scalar v = partial_cov_schur(s, x, x, z);
  if (is_zero(v)) throw SingularError("zero conditional variance of '" + s.order.at(x) + "'");
  return partial_cov_schur(s, x, y, z) / v;
}

/// Memoized conditional covariance matrices keyed by conditioning set.
///
/// Each matrix is derived from the one for the set without its highest
/// node by a rank-one update, so a family of nested queries costs one
/// update per distinct set.
template <typename Scalar>
class PartialCovOracle {
 public:
  explicit PartialCovOracle(CovMatrix<Scalar> s) : sigma_(std::move(s)) {}

  const CovMatrix<Scalar>& sigma() const { return sigma_; }

  /// Full conditional covariance matrix given z; rows and columns of z are zero.
  const Matrix<Scalar>& given(NodeSet z) {
    if (z.empty()) return sigma_.entries;
    if (auto it = memo_.find(z.bits()); it != memo_.end()) return it->second;
    const NodeIndex w = 63 - std::countl_zero(z.bits());
    NodeSet rest = z;
    rest.erase(w);
    Matrix<Scalar> m = given(rest);
    const Scalar pivot = m(w, w);
    if (is_zero(pivot)) {
      throw SingularError("zero partial variance of '" + sigma_.order.at(w) + "' given " + format(rest));
    }
    const Vector<Scalar> col = m.col(w);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (is_zero(col(i))) continue;
      const Scalar f = col(i) / pivot;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!is_zero(col(j))) m(i, j) -= f * col(j);
      }
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, w) = Scalar(0);
      m(w, i) = Scalar(0);
    }
    return memo_.emplace(z.bits(), std::move(m)).first->second;
  }

  Scalar cov(NodeIndex x, NodeIndex y, NodeSet z) {
    if (z.contains(x) || z.contains(y)) throw PreconditionError("query endpoints must not be conditioned on");
    return given(z)(x, y);
  }
  Scalar var(NodeIndex x, NodeSet z) { return cov(x, x, z); }

  void clear() { memo_.clear(); }

 private:
  std::string format(NodeSet s) const {
    std::string out = "{";
    for (NodeIndex n : s) out += (out.size() > 1 ? "," : "") + sigma_.order.at(n);
    return out + "}";
  }

  CovMatrix<Scalar> sigma_;
  std::unordered_map<std::uint64_t, Matrix<Scalar>> memo_;
};

/// Sigma - Sigma_{.Z} Sigma_ZZ^-1 Sigma_{Z.} over all nodes, via Schur.
template <typename Scalar>
Matrix<Scalar> conditional_covariance(const CovMatrix<Scalar>& s, NodeSet z) {
  const int n = s.size();
  Matrix<Scalar> out(n, n);
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i; j < n; ++j) {
      const Scalar v = (z.contains(i) || z.contains(j)) ? Scalar(0) : partial_cov_schur(s, i, j, z);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace pathcov
