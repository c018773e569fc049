#pragma once

// Exact arithmetic scalar types shared across the library.  All operator
// matrices and the exact LP path carry boost multiprecision rationals, so
// identity tests can compare values bit for bit instead of within tolerances.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kpb {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg) {}
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Doubles are binary rationals; the conversion below is exact.
inline Rational exact_rational(double x) {
  require(std::isfinite(x), "exact_rational: non-finite input");
  return Rational(x);
}

// Nearest fraction with the given fixed denominator (ties away from zero).
inline Rational rationalize(double x, std::int64_t denominator = 1000000) {
  require(denominator > 0, "rationalize: denominator must be positive");
  Rational scaled = exact_rational(x) * denominator;
  Int num = boost::multiprecision::numerator(scaled);
  Int den = boost::multiprecision::denominator(scaled);
  Int q = num / den, r = num % den;
  if (r != 0 && 2 * abs(r) >= den) q += (num < 0 ? -1 : 1);
  return Rational(q, Int(denominator));
}

inline std::string to_string(const Rational& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace kpb
