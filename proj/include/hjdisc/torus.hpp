#pragma once

#include <cmath>

namespace hjdisc {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    return y;
}

/// Geodesic distance on the circle of circumference 2*pi.
inline double dist_torus(double a, double b) {
    double d = std::fabs(wrap_angle(a - b));
    return d <= kTwoPi - d ? d : kTwoPi - d;
}

} // namespace hjdisc
