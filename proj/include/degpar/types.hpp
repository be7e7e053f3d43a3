#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace degpar {

/// Spatial point or vector. In one dimension the second component is zero.
using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Symmetric 2x2 matrix; for dim == 1 only `xx` is meaningful.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double trace() const { return xx + yy; }
    /// <M v, v>
    double quad(const Vec2& v) const { return xx * v[0] * v[0] + 2.0 * xy * v[0] * v[1] + yy * v[1] * v[1]; }
};

/// A function of (x, t), the currency of boundary data, sources and reference solutions.
using SpaceTimeFunction = std::function<double(const Vec2&, double)>;

}  // namespace degpar
