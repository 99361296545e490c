#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "coverwalk/errors.hpp"

namespace coverwalk {

/// Exact arithmetic type used throughout the exact lane.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parse "p/q", an integer, or a decimal like "0.375" / "-1.25".
/// Scientific notation is deliberately rejected: inputs meant to be exact
/// should be written exactly.
Rational parse_rational(const std::string& text);

/// Render as "p" or "p/q" in lowest terms (cpp_rational keeps them reduced).
std::string format_rational(const Rational& r);

/// Exact conversion from a binary double (every finite double is rational).
Rational rational_from_double(double x);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

} // namespace coverwalk
