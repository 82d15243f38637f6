#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sosgap {

/// Arbitrary-precision rational; arithmetic never wraps.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" with q >= 1, e.g. "1/1", "-3/4".
std::string to_fraction_string(const Rational& q);

/// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

double to_double(const Rational& q);

/// (a)_k = a (a-1) ... (a-k+1); zero when k > a >= 0.
BigInt falling_factorial(int a, int k);

}  // namespace sosgap
