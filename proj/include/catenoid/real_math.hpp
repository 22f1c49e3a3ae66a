#ifndef CATENOID_REAL_MATH_HPP
#define CATENOID_REAL_MATH_HPP

#include <cmath>

extern "C" {
__float128 sqrtq(__float128);
__float128 fabsq(__float128);
__float128 expq(__float128);
__float128 logq(__float128);
__float128 powq(__float128, __float128);
}

namespace catenoid {

using std::exp;
using std::fabs;
using std::log;
using std::pow;
using std::sqrt;

inline __float128 sqrt(__float128 x) { return sqrtq(x); }
inline __float128 fabs(__float128 x) { return fabsq(x); }
inline __float128 exp(__float128 x) { return expq(x); }
inline __float128 log(__float128 x) { return logq(x); }
inline __float128 pow(__float128 x, __float128 y) { return powq(x, y); }

}  // namespace catenoid

#endif
