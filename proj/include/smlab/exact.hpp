#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace smlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace smlab
