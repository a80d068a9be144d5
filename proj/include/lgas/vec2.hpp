#pragma once
// Small 2D vector used by all geometry and dynamics code.

#include <cmath>

namespace lgas {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(Vec2 r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(Vec2 r) { x -= r.x; y -= r.y; return *this; }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }

    /// z-component of the 3D cross product; > 0 when r lies counterclockwise of *this.
    constexpr double cross(Vec2 r) const { return x * r.y - y * r.x; }

    /// Counterclockwise perpendicular.
    constexpr Vec2 perp() const { return {-y, x}; }

    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }

    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }

    /// Rotate counterclockwise by angle a.
    Vec2 rotated(double a) const {
        double c = std::cos(a), s = std::sin(a);
        return {x * c - y * s, x * s + y * c};
    }

    friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

}  // namespace lgas
