#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

namespace pathcov {

/// Exact arbitrary-precision rational number with plain value semantics.
///
/// Wraps GMP's mpq_class but never leaks its expression templates, so it
/// can serve as an Eigen scalar. Values are always kept in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : value_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "p/q", an integer, or a finite decimal such as "-0.125".
  /// Throws InputError on anything else.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }

  /// "p/q" in lowest terms, or "p" when the denominator is 1.
  std::string str() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline Rational abs2(const Rational& r) { return r * r; }
inline Rational conj(const Rational& r) { return r; }
inline Rational real(const Rational& r) { return r; }
inline Rational imag(const Rational&) { return Rational(0); }

}  // namespace pathcov

namespace Eigen {

template <>
struct NumTraits<pathcov::Rational> : GenericNumTraits<pathcov::Rational> {
  using Real = pathcov::Rational;
  using NonInteger = pathcov::Rational;
  using Nested = pathcov::Rational;
  using Literal = pathcov::Rational;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
