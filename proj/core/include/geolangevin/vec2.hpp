#pragma once

#include <cmath>

namespace geolangevin {

/// Planar vector for positions, velocities and forces of the slow coordinate.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return a *= (1.0 / s); }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }

/// z-component of a × b.
constexpr double cross(const Vec2& a, const Vec2& b) noexcept { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) noexcept { return dot(a, a); }

inline Vec2 rotated(const Vec2& a, double theta) noexcept {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

}  // namespace geolangevin
