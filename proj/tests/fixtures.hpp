#pragma once

#include <string>
#include <string_view>

#include "pathcov/dsl.hpp"
#include "pathcov/random_diagram.hpp"
#include "pathcov/sem_algebra.hpp"

namespace pathcov::test {

inline std::string data_path(std::string_view name) { return std::string(PATHCOV_TEST_DATA) + "/" + std::string(name); }

inline PathDiagram<Rational> load(std::string_view name) { return load_diagram(data_path(name)); }

inline Rational q(const char* s) { return Rational::parse(s); }

template <typename S>
void set_coef(PathDiagram<S>& d, std::string_view tail, std::string_view head, S v) {
  const auto& g = d.graph();
  const NodeIndex t = g.index(tail);
  const NodeIndex h = g.index(head);
  for (std::size_t k = 0; k < g.directed().size(); ++k) {
    if (g.directed()[k].tail == t && g.directed()[k].head == h) {
      d.set_coef(static_cast<int>(k), std::move(v));
      return;
    }
  }
  throw std::logic_error("no such edge");
}

template <typename S>
void set_noise(PathDiagram<S>& d, std::string_view node, S v) {
  d.set_noise(d.index(node), std::move(v));
}

template <typename S>
NodeSet nodes(const PathDiagram<S>& d, std::initializer_list<std::string_view> names) {
  NodeSet s;
  for (auto n : names) s.insert(d.index(n));
  return s;
}

template <typename S>
S pcov(const PathDiagram<S>& d, std::string_view x, std::string_view y, std::initializer_list<std::string_view> z = {}) {
  return partial_cov_schur(implied_covariance(d), d.index(x), d.index(y), nodes(d, z));
}

template <typename S>
S regress(const PathDiagram<S>& d, std::string_view y, std::string_view x, std::initializer_list<std::string_view> z = {}) {
  return regression_coef(implied_covariance(d), d.index(y), d.index(x), nodes(d, z));
}

/// Chain X -> Z -> Y with Z -> W (Fig. 2 (i)) or W -> Z (Fig. 2 (ii)).
inline PathDiagram<Rational> mediator(bool child, const Rational& a, const Rational& b, const Rational& c) {
  PathDiagram<Rational> d;
  for (const char* n : {"X", "Z", "Y", "W"}) d.add_node(n, Rational(1));
  d.add_edge(d.index("X"), d.index("Z"), a);
  d.add_edge(d.index("Z"), d.index("Y"), b);
  if (child) {
    d.add_edge(d.index("Z"), d.index("W"), c);
  } else {
    d.add_edge(d.index("W"), d.index("Z"), c);
  }
  return d;
}

/// Fig. 3 (i) family: U -> X, U -> Y, U -> Z and optionally X -> Y.
/// Sigma = T Omega T^T without validation, so zero noise is allowed.
/// T is the finite series I + B + B^2 + ... of the acyclic coefficient matrix.
template <typename S>
CovMatrix<S> raw_covariance(const PathDiagram<S>& d) {
  const int n = d.size();
  const Matrix<S> b = d.coefficients();
  Matrix<S> t = Matrix<S>::Identity(n, n);
  Matrix<S> power = Matrix<S>::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    power = (power * b).eval();
    t += power;
  }
  return {d.graph().names(), t * d.omega() * t.transpose()};
}

inline PathDiagram<Rational> proxy_family(bool with_alpha, const Rational& alpha, const Rational& beta,
                                          const Rational& gamma, const Rational& delta) {
  PathDiagram<Rational> d;
  for (const char* n : {"U", "X", "Y", "Z"}) d.add_node(n, Rational(1));
  d.add_edge(d.index("U"), d.index("X"), beta);
  d.add_edge(d.index("U"), d.index("Y"), gamma);
  d.add_edge(d.index("U"), d.index("Z"), delta);
  if (with_alpha) d.add_edge(d.index("X"), d.index("Y"), alpha);
  return d;
}

}  // namespace pathcov::test
