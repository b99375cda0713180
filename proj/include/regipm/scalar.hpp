#pragma once

#include <cmath>
#include <quadmath.h>

namespace regipm {

// Wide scalar used internally for Newton-system assembly, factorization and
// direction recovery. The iterates themselves stay in double; the extra
// mantissa absorbs the cancellation that appears once Theta spreads over
// many orders of magnitude.
using quad = __float128;

inline double to_double(double x) { return x; }
inline double to_double(long double x) { return static_cast<double>(x); }
inline double to_double(quad x) { return static_cast<double>(x); }

inline double scalar_sqrt(double x) { return std::sqrt(x); }
inline long double scalar_sqrt(long double x) { return std::sqrt(x); }
inline quad scalar_sqrt(quad x) { return sqrtq(x); }

inline double scalar_abs(double x) { return std::fabs(x); }
inline long double scalar_abs(long double x) { return std::fabs(x); }
inline quad scalar_abs(quad x) { return fabsq(x); }

}  // namespace regipm
