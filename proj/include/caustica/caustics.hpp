#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "caustica/geometry.hpp"
#include "caustica/scene.hpp"

namespace caustica {

/// One-parameter planar ray family (all rays in a z = const plane).
struct RayFamily1D {
    std::function<Ray(double)> at;
    double param_min{0};
    double param_max{1};
};

/// Two-parameter ray family in 3D.
struct RayFamily2D {
    std::function<Ray(double, double)> at;
};

enum class SheetLabel { H, V };

struct CausticSample {
    double param{0};
    Vec3 point;
    bool degenerate{false};  // neighboring rays parallel, point at infinity
    bool cusp{false};        // tangent direction reverses here
};

struct CausticSheet {
    std::vector<CausticSample> samples;
    SheetLabel label{SheetLabel::H};
};

/// Envelope of a planar ray family: for each parameter, the limit point
/// where the ray meets its infinitesimal neighbor (finite differences at
/// 1e-6 of the domain span). Degenerate parameters are flagged, never
/// fabricated.
CausticSheet envelope_2d(const RayFamily1D& family, int param_samples);

/// Signed distances along the chief ray family.at(u0,v0) at which the
/// ray-family Jacobian drops rank. t_h belongs to the first-parameter
/// (horizontal) fan, t_v to the second-parameter (vertical) fan.
struct FocalPoints {
    double t_h{0};
    double t_v{0};
};

struct FocalScanOptions {
    double du{1e-6};
    double dv{1e-6};
    double t_min{-1};
    double t_max{1};
    int samples{10000};
    double bisect_tol{1e-10};
};

/// Empty result = no Jacobian degeneracy in the scan range (e.g. the flat
/// mirror limit, where both focal points coincide and the determinant does
/// not change sign).
std::optional<FocalPoints> focal_points_on_chief_ray(const RayFamily2D& family,
                                                     double u0, double v0,
                                                     const FocalScanOptions& opts);

// --- concrete families ---------------------------------------------------

/// Rays from a 2D point source reflected off the interior of the circle
/// x^2 + y^2 = R^2 in the z = 0 plane; parameter = azimuth of the
/// reflection point.
RayFamily1D point_source_circle_family(double radius, const Vec3& source);

/// Parallel rays along -x reflected off the concave far wall of the same
/// circle; parameter = impact parameter in (-R, R).
RayFamily1D parallel_rays_circle_family(double radius);

/// Rays from a fixed source point reflected off the tube, parametrized by
/// (azimuth, height) of the reflection point.
RayFamily2D cylinder_reflection_family(const Scene& s, const Vec3& source);

// --- rainbow --------------------------------------------------------------

/// Total deviation of a ray through a spherical drop with one internal
/// reflection: pi + 2 i - 4 r, sin i = b, sin r = b / n.
double rainbow_deviation(double n, double b);

struct RainbowMinimum {
    double b{0};          // impact parameter of minimum deviation
    double deviation{0};  // radians
};

/// Golden-section minimization of the deviation over b in (0, 1).
RainbowMinimum rainbow_minimum(double n);

// --- finite-aperture blur -------------------------------------------------

enum class SpotOrientation { Vertical, Horizontal };

/// Point cloud on the plane conjugate to the focus distance, with its
/// principal-axis spread.
struct BlurSpot {
    std::vector<Vec3> points;      // (h, v, 0) offsets in meters on the focal plane
    double sigma_major{0};
    double sigma_minor{0};
    SpotOrientation orientation{SpotOrientation::Vertical};
    double occluded_fraction{0};   // aperture fraction with no reflection path
};

/// Trace a grid of rays from `source` via the tube across an aperture of
/// the given diameter centered on the eye, refocused by an ideal thin lens
/// onto the plane at focus_distance in front of the eye along the chief
/// ray through P.
std::optional<BlurSpot> blur_spot(const Scene& s, double aperture_diameter,
                                  double focus_distance, const Vec3& source,
                                  const Vec3& P, int grid = 41);

}  // namespace caustica
