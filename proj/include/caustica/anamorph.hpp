#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "caustica/image.hpp"
#include "caustica/scene.hpp"

namespace caustica {

/// The three constructions: image wrapped on the tube surface (pinhole
/// ray tracing), on the interior virtual-image surface, or laid flat on
/// the table behind the tube.
enum class AnamorphKind { Erect, ThreeD, Flat };

const char* to_string(AnamorphKind k);
std::optional<AnamorphKind> anamorph_kind_from_string(const std::string& s);

/// Source-image coordinates: u across (viewer's right positive, centered),
/// v up from the bottom edge, both meters.
struct SourcePoint {
    double u{0};
    double v{0};
};

struct AnamorphBuildError {
    std::string code;    // "region_overflow"
    std::string detail;  // key=value description of the clipped extent
};

/// Invertible correspondence between source-image space and the table
/// sheet, with physical scale. Built once per (kind, scene, size); the
/// forward and inverse maps are pure and thread-safe afterwards.
class AnamorphMap {
public:
    static std::variant<AnamorphMap, AnamorphBuildError> build(AnamorphKind kind,
                                                               const Scene& scene,
                                                               double source_width,
                                                               double source_height,
                                                               double flat_standoff = 0.01);

    /// Table point carrying source point (u, v); empty outside the domain.
    std::optional<Vec3> forward(const SourcePoint& sp) const;

    /// Source point whose ink lands at table point T; empty outside.
    std::optional<SourcePoint> inverse(const Vec3& table_point) const;

    /// Sweep-friendly inverse: seeds the azimuth solve with the previous
    /// root (start each sweep with a NaN hint).
    std::optional<SourcePoint> inverse_hinted(const Vec3& table_point,
                                              double& azimuth_hint) const;

    AnamorphKind kind() const { return kind_; }
    const Scene& scene() const { return scene_; }
    double source_width() const { return width_; }
    double source_height() const { return height_; }

    /// Bounding rectangle of the mapped source region on the table,
    /// including the tube footprint (xmin, xmax, ymin, ymax).
    std::array<double, 4> table_bounds() const;

private:
    AnamorphMap() = default;

    double arclen_at(double phi, double z) const;
    std::optional<double> height_for_arclen(double phi, double v) const;

    AnamorphKind kind_{AnamorphKind::Erect};
    Scene scene_;
    double width_{0}, height_{0};
    double eye_az_{0};
    double flat_standoff_{0.01};

    // ThreeD: arc length up the interior-surface vertical sections,
    // tabulated over azimuth x height.
    std::vector<double> arc_table_;  // arc_rows_ x arc_cols_, azimuth-major
    int arc_cols_{0}, arc_rows_{0};
    double arc_phi0_{0}, arc_dphi_{0};
    double arc_z0_{0}, arc_dz_{0};
};

struct RenderStats {
    long long mapped_pixels{0};
    long long total_pixels{0};
    long long unreachable_pixels{0};  // inside the table rect, outside the map domain
    std::array<double, 4> region{};   // xmin, xmax, ymin, ymax on the table
};

/// Inverse-sample the source through the map onto a table raster at the
/// given dpi. Pixels outside the domain stay white; the tube footprint
/// circle is stroked at true scale. Deterministic for any worker count.
RasterImage render(const AnamorphMap& map, const RasterImage& src, double dpi,
                   RenderStats* stats = nullptr, int workers = 0);

enum class SheetSize { A4, Letter };

struct SheetLayoutError {
    std::string code;  // "does_not_fit"
    double required_width_mm{0}, required_height_mm{0};
};

struct SheetLayout {
    RasterImage sheet;
    int content_x{0}, content_y{0};      // content offset, px
    double circle_center_x{0}, circle_center_y{0};  // tube placement, px
    double circle_diameter_px{0};
    int bar_x{0}, bar_y{0}, bar_w{0}, bar_h{0};  // 10 cm scale bar, px
};

/// Center the rendered anamorph on an A4 or Letter sheet with the tube
/// placement circle at true scale and a 10 cm scale bar; margins at least
/// 10 mm.
std::variant<SheetLayout, SheetLayoutError> sheet_layout(const RasterImage& content,
                                                         const RenderStats& stats,
                                                         SheetSize sheet,
                                                         double tube_radius);

}  // namespace caustica
