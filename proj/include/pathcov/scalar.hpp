#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "pathcov/rational.hpp"

namespace pathcov {

/// Per-scalar policy: exactness, zero test and canonical text form.
///
/// Rational arithmetic is exact, so zero means zero. Doubles treat any
/// magnitude at or below `tolerance` as zero; this is the singularity
/// threshold used for pivots as well.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v) { return v.is_zero(); }
  static int sign(const Rational& v) { return v.sign(); }
  static std::string format(const Rational& v) { return v.str(); }
  static Rational from_rational(const Rational& v) { return v; }
  static double to_double(const Rational& v) { return v.to_double(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-12;
  static bool is_zero(double v) { return std::abs(v) <= tolerance; }
  static int sign(double v) { return is_zero(v) ? 0 : (v < 0 ? -1 : 1); }
  static std::string format(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }
  static double from_rational(const Rational& v) { return v.to_double(); }
  static double to_double(double v) { return v; }
};

template <typename Scalar>
bool is_zero(const Scalar& v) {
  return ScalarTraits<Scalar>::is_zero(v);
}

template <typename Scalar>
int sign_of(const Scalar& v) {
  return ScalarTraits<Scalar>::sign(v);
}

template <typename Scalar>
std::string format_scalar(const Scalar& v) {
  return ScalarTraits<Scalar>::format(v);
}

}  // namespace pathcov
