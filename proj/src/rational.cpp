#include "sosgap/rational.hpp"

#include <cmath>

#include "sosgap/error.hpp"

namespace sosgap {

std::string to_fraction_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::InvalidParams, "cannot convert a non-finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  // 53 bits of mantissa scaled to an integer.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt falling_factorial(int a, int k) {
  if (k < 0) fail(ErrorKind::InvalidParams, "negative falling factorial order");
  BigInt r(1);
  for (int i = 0; i < k; ++i) {
    r *= (a - i);
    if (r == 0) break;
  }
  return r;
}

}  // namespace sosgap
