#include "caustica/geometry.hpp"

namespace caustica {

std::optional<Vec3> refract(const Vec3& d, const Vec3& n, const Interface& iface) {
    const double eta = iface.n_incident / iface.n_transmitted;
    const double cos_i = -dot(d, n);
    const double sin2_t = eta * eta * (1.0 - cos_i * cos_i);
    if (sin2_t > 1.0) return std::nullopt;  // total internal reflection
    const double cos_t = std::sqrt(1.0 - sin2_t);
    return normalized(eta * d + (eta * cos_i - cos_t) * n);
}

std::optional<Vec3> intersect_plane_z0(const Ray& r) {
    if (r.dir.z == 0.0) return std::nullopt;  // parallel
    const double t = -r.origin.z / r.dir.z;
    if (t < 0.0) return std::nullopt;  // moving away
    Vec3 p = r.origin + t * r.dir;
    p.z = 0.0;
    return p;
}

std::optional<CylinderHit> intersect_cylinder(const Ray& r, double radius) {
    // Quadratic in t for the xy projection.
    const double a = r.dir.x * r.dir.x + r.dir.y * r.dir.y;
    const double b = 2.0 * (r.origin.x * r.dir.x + r.origin.y * r.dir.y);
    const double c = r.origin.x * r.origin.x + r.origin.y * r.origin.y - radius * radius;
    if (a == 0.0) return std::nullopt;  // ray parallel to the axis
    const double disc = b * b - 4.0 * a * c;
    if (disc <= kDiscriminantTol) return std::nullopt;  // miss or grazing
    const double sq = std::sqrt(disc);
    const double t1 = (-b - sq) / (2.0 * a);
    const double t2 = (-b + sq) / (2.0 * a);
    double t = t1;
    if (t <= 0.0) t = t2;
    if (t <= 0.0) return std::nullopt;
    const Vec3 p = r.origin + t * r.dir;
    return CylinderHit{p, Vec3{p.x / radius, p.y / radius, 0.0}, t};
}

}  // namespace caustica
