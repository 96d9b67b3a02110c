#pragma once

// Scalar helpers shared by plain floating point and tape variables, so that
// generic code can call primal() and sigmoid() on any supported scalar.

#include <cmath>

namespace gln::ad {

inline double primal(double x) { return x; }
inline long double primal(long double x) { return x; }

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline long double sigmoid(long double z) { return 1.0L / (1.0L + std::exp(-z)); }

}  // namespace gln::ad
