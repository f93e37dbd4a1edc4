#pragma once

#include <array>
#include <cmath>

namespace nonlocal {

/// Point or vector in R^d for d <= 3; unused trailing coordinates are zero.
using Point = std::array<double, 3>;

inline constexpr int kMaxDim = 3;

inline double dot(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// a + s * b
inline Point axpy(const Point& a, double s, const Point& b) {
    return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
}

inline Point scaled(const Point& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Point negated(const Point& a) { return {-a[0], -a[1], -a[2]}; }

inline Point point1(double x) { return {x, 0.0, 0.0}; }

inline Point point2(double x, double y) { return {x, y, 0.0}; }

}  // namespace nonlocal
