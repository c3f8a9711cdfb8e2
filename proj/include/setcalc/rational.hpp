#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace setcalc {

// Exact arithmetic used by the rational evaluation mode. Construction from a
// finite double is exact (doubles are dyadic rationals).
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace setcalc
