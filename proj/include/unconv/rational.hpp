#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string_view>

#include "unconv/errors.hpp"

namespace unconv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact dyadic decomposition of a finite double. No rounding: the result
// converts back to exactly the same double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p/q", integers, and decimal/scientific literals ("-3.25e-2")
// into an exact rational.
inline Rational rational_from_decimal(std::string_view text) {
  const auto fail = [&] {
    throw ParseError("rational_from_decimal: cannot parse '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  const auto n = text.size();
  if (n == 0) fail();

  const auto read_sign = [&]() -> int {
    if (i < n && (text[i] == '+' || text[i] == '-')) return text[i++] == '-' ? -1 : 1;
    return 1;
  };
  const auto read_digits = [&](BigInt& out) -> std::size_t {
    std::size_t count = 0;
    while (i < n && text[i] >= '0' && text[i] <= '9') {
      out = out * 10 + (text[i] - '0');
      ++i;
      ++count;
    }
    return count;
  };

  const int sign = read_sign();
  BigInt ipart = 0;
  const std::size_t idigits = read_digits(ipart);

  if (i < n && text[i] == '/') {
    ++i;
    if (idigits == 0) fail();
    const int dsign = read_sign();
    BigInt den = 0;
    if (read_digits(den) == 0 || i != n || den == 0) fail();
    return Rational(BigInt(sign * dsign) * ipart, den);
  }

  BigInt scaled = ipart;
  std::size_t frac_digits = 0;
  if (i < n && text[i] == '.') {
    ++i;
    const std::size_t before = i;
    read_digits(scaled);
    frac_digits = i - before;
  }
  if (idigits == 0 && frac_digits == 0) fail();

  std::int64_t exp10 = 0;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const int esign = read_sign();
    BigInt e = 0;
    if (read_digits(e) == 0 || e > 9999) fail();
    exp10 = esign * e.convert_to<std::int64_t>();
  }
  if (i != n) fail();

  exp10 -= static_cast<std::int64_t>(frac_digits);
  Rational r(BigInt(sign) * scaled);
  BigInt pow10 = 1;
  for (std::int64_t k = 0; k < (exp10 < 0 ? -exp10 : exp10); ++k) pow10 *= 10;
  if (exp10 > 0) {
    r *= Rational(pow10);
  } else if (exp10 < 0) {
    r /= Rational(pow10);
  }
  return r;
}

}  // namespace unconv
