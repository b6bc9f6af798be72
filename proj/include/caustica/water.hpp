#pragma once

#include <optional>
#include <vector>

#include "caustica/geometry.hpp"

namespace caustica {

/// Flat air-water interface at z = 0; water below. The eye sits above the
/// surface (pool, ruler) or below it (archer fish).
struct WaterScene {
    Vec3 eye{0.0, 0.0, 3.048};
    double floor_depth{3.048};
    double n_water{kNWater};
};

/// The two astigmatic virtual images of a submerged point seen from air:
/// tangential (in the plane of incidence) and sagittal (across it). Both
/// lie on the backward extension of the refracted chief ray.
struct RefractedImagePair {
    Vec3 h_point;  // tangential
    Vec3 v_point;  // sagittal
    Vec3 crossing;         // chief-ray surface point
    double air_angle{0};   // chief angle from vertical, air side
    double water_angle{0}; // chief angle from vertical, water side
};

/// Image pair of a submerged source (source.z < 0) for an eye in air.
/// The chief ray is found by bisection on the surface crossing; the two
/// images by degenerating the in-plane and cross-plane refracted fans.
std::optional<RefractedImagePair> apparent_point(const WaterScene& ws, const Vec3& source);

struct PoolProfileRow {
    double gaze{0};        // radians below horizontal
    Vec3 floor_point;      // true floor point seen along this gaze
    Vec3 h_point;          // tangential caustic image of the floor point
    Vec3 v_point;          // sagittal image
    Vec3 back_projection;  // chief ray swung straight: true path length along the gaze
};

/// Apparent pool floor, one row per gaze angle. The floor is flat at the
/// scene depth; each gaze refracts to its own floor point whose images are
/// reported per row.
std::vector<PoolProfileRow> pool_floor_profile(const WaterScene& ws,
                                               const std::vector<double>& gaze_angles);

struct PoolSlopes {
    double h{0};     // local apparent slope of the tangential-image floor, rad
    double v{0};     // same for the sagittal image
    double back{0};  // same for the straight back-projection
};

/// Local apparent upward slope of the floor image curves at the given
/// gaze, by a central difference of half a degree.
std::optional<PoolSlopes> pool_local_slopes(const WaterScene& ws, double gaze);

struct RulerShape {
    std::vector<Vec3> h_curve;   // tangential image of the submerged ruler
    std::vector<Vec3> v_curve;   // sagittal image
    std::vector<double> depths;  // sample depths along the ruler
    int dropped{0};
};

/// Apparent shape of a vertical ruler reaching from the surface down to
/// -length at the given horizontal stand-off from the eye.
RulerShape ruler_apparent_shape(const WaterScene& ws, double standoff, double length,
                                int samples);

struct ArcherSolution {
    Vec3 apparent_dir;   // underwater direction the fish sees the target in
    Vec3 true_dir;       // straight eye->target
    double correction{0};  // angle between them, radians
    double water_angle{0}; // underwater chief angle from vertical
};

/// Aiming problem of the archer fish (eye underwater, target in air).
std::optional<ArcherSolution> archer_aim(const WaterScene& ws, const Vec3& target);

/// Emergent air-side direction for an underwater gaze direction; empty
/// when the gaze lies outside Snell's window (total internal reflection).
std::optional<Vec3> archer_emergent_direction(const WaterScene& ws, const Vec3& apparent_dir);

/// Half-angle of Snell's window, arcsin(1/n).
double snells_window_limit(double n_water);

}  // namespace caustica
