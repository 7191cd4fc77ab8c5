#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <regex>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "barely/errors.hpp"

namespace barely {

using BigInt = boost::multiprecision::cpp_int;
/// Exact rational; always stored in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" into a rational. The denominator must be positive.
inline Rational parse_rational(std::string_view text) {
  static const std::regex kPattern(R"(^(-?[0-9]+)(?:/([0-9]+))?$)");
  std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, kPattern)) {
    throw InputError("malformed rational '" + s + "' (expected p/q)");
  }
  BigInt num(m[1].str());
  BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
  if (den == 0) throw InputError("zero denominator in '" + s + "'");
  return Rational(num, den);
}

/// Canonical text form "p/q" (the denominator is always written, even when 1).
inline std::string format_rational(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// A point of the index set X, kept as an exact rational.
class IndexValue {
 public:
  IndexValue() = default;
  explicit IndexValue(Rational value) : value_(std::move(value)) {}
  IndexValue(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InputError("zero denominator");
    value_ = Rational(BigInt(num), BigInt(den));
  }

  static IndexValue parse(std::string_view text) { return IndexValue(parse_rational(text)); }

  const Rational& value() const { return value_; }
  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  std::string to_string() const { return format_rational(value_); }

  friend bool operator==(const IndexValue& a, const IndexValue& b) { return a.value_ == b.value_; }
  // Cross-multiplication; denominators are positive. Cheaper than the
  // division-based rational comparison.
  friend std::strong_ordering operator<=>(const IndexValue& a, const IndexValue& b) {
    const BigInt lhs = a.numerator() * b.denominator();
    const BigInt rhs = b.numerator() * a.denominator();
    if (lhs < rhs) return std::strong_ordering::less;
    if (rhs < lhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend std::ostream& operator<<(std::ostream& os, const IndexValue& v) { return os << v.to_string(); }

 private:
  Rational value_{0};
};

}  // namespace barely
