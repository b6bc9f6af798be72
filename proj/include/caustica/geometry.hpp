#pragma once

#include <optional>

#include "caustica/vec3.hpp"

namespace caustica {

/// A light ray: origin plus unit direction.
struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit norm
};

/// Refractive boundary, indices on the incident and transmitted side.
struct Interface {
    double n_incident{1.0};
    double n_transmitted{1.0};
};

inline constexpr double kNAir = 1.0;
inline constexpr double kNWater = 1.333;

/// Grazing hits with quadratic discriminant below this count as misses.
inline constexpr double kDiscriminantTol = 1e-12;

/// Mirror reflection of direction d at a surface with unit normal n.
inline Vec3 reflect(const Vec3& d, const Vec3& n) {
    return d - 2.0 * dot(d, n) * n;
}

/// Snell refraction of unit direction d at unit normal n (d·n < 0, ray
/// entering the surface). Empty result signals total internal reflection.
std::optional<Vec3> refract(const Vec3& d, const Vec3& n, const Interface& iface);

/// First intersection of the ray with the table plane z = 0 (t >= 0).
std::optional<Vec3> intersect_plane_z0(const Ray& r);

struct CylinderHit {
    Vec3 point;
    Vec3 normal;  // outward, horizontal
    double t;     // ray parameter of the hit
};

/// Nearest positive-t hit of the ray with the infinite cylinder
/// x^2 + y^2 = R^2 about the z-axis. Tangential grazings are misses.
std::optional<CylinderHit> intersect_cylinder(const Ray& r, double radius);

}  // namespace caustica
