#pragma once

#include <stdexcept>
#include <string>

#include "caustica/vec3.hpp"

namespace caustica {

/// Viewing geometry for the cylindrical mirror: eye position, tube radius
/// and height, all in meters, in the fixed table frame (table z = 0,
/// cylinder axis = z-axis, eye on the +x side).
struct Scene {
    Vec3 eye{0.275, 0.0, 0.40};
    double radius{0.025};
    double height{0.15};

    /// True when the eye is outside the tube and above the table.
    bool valid() const {
        return radius > 0.0 && eye.z > 0.0 && eye.hnorm() > radius;
    }
};

/// The tube of the text: diameter 5 cm, eye 25 cm from the surface and
/// 40 cm above the table. `from_axis` switches the 25 cm to an axis
/// measurement instead.
Scene default_scene(bool eye_distance_from_axis = false);

struct SceneConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse a plain-text key=value scene config. Recognized keys:
///   units          default unit for bare numbers (m, cm, mm, in, ft)
///   eye_x eye_y eye_z            explicit eye position
///   eye_distance  eye_height     alternative eye placement on the +x side
///   eye_distance_from            surface | axis (default surface)
///   radius  height               tube geometry
/// Values may carry their own unit suffix (e.g. 25cm), which wins over
/// the file-level `units`. Lines starting with # are comments.
Scene parse_scene_config(const std::string& text);

/// Load a scene config file; throws SceneConfigError with path context.
Scene load_scene_config(const std::string& path);

/// Serialize a scene as a key=value config (meters, full precision).
std::string scene_to_config(const Scene& s);

}  // namespace caustica
