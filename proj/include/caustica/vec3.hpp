#pragma once

#include <cmath>

namespace caustica {

/// 3D vector in table coordinates (meters for positions, unit-norm for
/// directions). The table is the plane z = 0, the mirror axis is the z-axis.
struct Vec3 {
    double x{0}, y{0}, z{0};

    Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    /// Length of the horizontal (xy) projection.
    double hnorm() const { return std::hypot(x, y); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Vec3 normalized(const Vec3& v) { return v / v.norm(); }

/// Scalar cross product of the xy projections.
constexpr double cross2(const Vec3& a, const Vec3& b) { return a.x * b.y - a.y * b.x; }

/// Dot product of the xy projections.
constexpr double dot2(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y; }

}  // namespace caustica
