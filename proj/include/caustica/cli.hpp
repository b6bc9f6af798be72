#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "caustica/anamorph.hpp"
#include "caustica/scene.hpp"
#include "caustica/vec3.hpp"

namespace caustica::cli {

struct AnamorphArgs {
    AnamorphKind kind{AnamorphKind::ThreeD};
    std::string image_path;
    std::string out_path;
    std::string sidecar_path;  // default: out_path + ".json"
    Scene scene;
    double dpi{300.0};
    double source_width{0.06};
    double source_height{0.06};
    std::optional<SheetSize> sheet;
    double flat_standoff{0.01};
    int threads{0};
};

struct Caustic2DArgs {
    std::string mode{"point"};  // point | parallel
    double radius{1.0};
    double source_x{0.5};
    double source_y{0.0};
    int rays{240};
    int samples{2048};
    std::string out_svg;
    std::string out_csv;
};

struct RainbowArgs {
    double n{1.333};
    int samples{100000};
    std::string out_csv;
    std::string out_svg;
};

struct VirtualSurfaceArgs {
    Scene scene;
    int azimuth_samples{64};
    int height_samples{24};
    std::string out_csv;
    std::string out_svg;
};

struct BlurSpotArgs {
    Scene scene;
    double aperture{0.004};
    std::string focus{"h"};  // h | v | explicit length
    double point_height{0.06};
    double point_azimuth{0.0};
    std::string out_csv;
    std::string out_svg;
};

struct PoolArgs {
    double eye_height{3.048};
    double depth{3.048};
    double gaze{0.6108652381980153};  // 35 degrees
    double gaze_min_deg{5.0};
    double gaze_max_deg{85.0};
    int gaze_steps{81};
    std::string out_csv;
    std::string out_svg;
};

struct RulerArgs {
    double eye_height{0.15};
    double standoff{0.6};
    double length{0.3};
    int samples{40};
    std::string out_csv;
    std::string out_svg;
};

struct ArcherArgs {
    double eye_depth{0.3};
    std::optional<Vec3> target;
    std::optional<double> apparent_angle;  // radians from vertical
};

using Command = std::variant<AnamorphArgs, Caustic2DArgs, RainbowArgs, VirtualSurfaceArgs,
                             BlurSpotArgs, PoolArgs, RulerArgs, ArcherArgs>;

struct UsageError {
    std::string message;
    int exit_code{2};
};

/// Parse a full argv (without the program name) into a validated,
/// unit-resolved command. Paper-geometry defaults apply where flags are
/// omitted; precedence is flags > config file > defaults.
std::variant<Command, UsageError> parse_args(const std::vector<std::string>& args);

/// Dispatch to the owning module; writes outputs atomically. Returns 0 on
/// success, 1 on domain errors (one machine-readable line on stderr).
int run(const Command& cmd);

int cli_main(int argc, char** argv);

}  // namespace caustica::cli
