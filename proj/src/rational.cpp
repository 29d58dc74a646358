#include "pathcov/rational.hpp"

#include <cctype>
#include <ostream>

#include "pathcov/error.hpp"

namespace pathcov {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) : value_(num, den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const auto bad = [&] { return InputError("malformed number '" + std::string(text) + "'"); };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  mpq_class value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw bad();
    value = mpq_class(n, d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw bad();
    }
    mpz_class n(std::string(whole) + std::string(frac), 10);
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    value = mpq_class(n, d);
  } else {
    if (!all_digits(body)) throw bad();
    value = mpq_class(mpz_class(std::string(body), 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(value);
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace pathcov
