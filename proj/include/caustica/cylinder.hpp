#pragma once

#include <optional>
#include <vector>

#include "caustica/geometry.hpp"
#include "caustica/scene.hpp"

namespace caustica {

/// The two astigmatic virtual images of one source point seen in the tube.
/// Both lie on the backward extension of the chief ray beyond the mirror.
struct ImagePair {
    Vec3 h_point;  // tangential image, from the horizontal fan
    Vec3 v_point;  // sagittal image, the tangent-plane mirror image
};

/// Cylinder surface point given as azimuth (radians, 0 = facing the eye
/// for the default scene) and height above the table.
struct SurfacePoint {
    double azimuth{0};
    double height{0};
};

inline Vec3 cylinder_point(const Scene& s, const SurfacePoint& p) {
    return {s.radius * std::cos(p.azimuth), s.radius * std::sin(p.azimuth), p.height};
}

inline Vec3 cylinder_normal(const SurfacePoint& p) {
    return {std::cos(p.azimuth), std::sin(p.azimuth), 0.0};
}

/// Azimuth of the visibility silhouette: P is visible from the eye iff
/// |azimuth - eye azimuth| < this limit.
double visible_azimuth_limit(const Scene& s);

/// Azimuths phi where a ray from `a` reflects off the circle of the given
/// radius to `b` (horizontal problem, xy components only). Only roots on
/// the face seen by both endpoints are returned. Bracketed bisection with
/// secant refinement, tolerance 1e-12 rad.
std::vector<double> reflection_azimuths(double radius, const Vec3& a, const Vec3& b);

/// True when the surface point faces the eye (normal . (eye - P) > 0).
bool visible_from_eye(const Scene& s, const Vec3& P);

/// True when the straight eye->T sight line passes through the finite tube
/// (the point's ink would be hidden behind the cylinder).
bool table_point_occluded(const Scene& s, const Vec3& T);

/// Reflect the eye->P sight line at P and continue to the table.
/// Empty when P is not visible or the reflected ray never descends.
std::optional<Vec3> trace_to_table(const Scene& s, const Vec3& P);

/// Inverse of trace_to_table: the cylinder point whose reflection of the
/// eye's sight line lands on table point T (T.z = 0, outside the footprint,
/// not occluded by the tube). Solves the horizontal alignment problem by
/// bracketed bisection in azimuth; the height follows from the linear
/// vertical relation. Empty when T is unreachable.
std::optional<Vec3> solve_reflection_point(const Scene& s, const Vec3& T);

/// Same solve seeded with the previous azimuth root (pass NaN to start).
/// Rasterization sweeps call this per pixel: neighboring targets share
/// nearly the same root, which turns the global scan into a short local
/// bracket. Falls back to the full scan when the seed fails.
std::optional<Vec3> solve_reflection_point_hinted(const Scene& s, const Vec3& T,
                                                  double& azimuth_hint);

/// The H and V virtual images of `source` for the sight line through P.
/// Preconditions: P on the cylinder, visible, and source placed so its
/// reflection at P reaches the eye (grazing chief rays rejected).
std::optional<ImagePair> image_pair(const Scene& s, const Vec3& P, const Vec3& source);

/// One sample of the interior virtual-image surface.
struct SurfaceSample {
    SurfacePoint param;
    Vec3 h_point;
    Vec3 table_source;
};

struct VirtualSurface {
    std::vector<SurfaceSample> samples;  // row-major, azimuth fastest
    int skipped{0};                      // grid nodes with no valid chief ray
};

/// Sample the locus of H points over an azimuth x height grid of cylinder
/// points (degenerate nodes skipped and counted). Every sample lies inside
/// the tube and meets the base circle as height -> 0.
VirtualSurface virtual_surface(const Scene& s, int azimuth_samples, int height_samples,
                               double azimuth_span_fraction = 0.95,
                               double height_min = 1e-4);

}  // namespace caustica
