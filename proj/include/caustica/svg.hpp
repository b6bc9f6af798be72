#pragma once

#include <string>
#include <vector>

#include "caustica/vec3.hpp"

namespace caustica {

/// Minimal deterministic SVG 1.1 figure builder for the ray/caustic
/// diagrams and profiles. World coordinates are meters in a chosen plane
/// (y up on the page); the canvas is millimeters. All numbers are written
/// with 6 significant digits so identical figures emit identical bytes.
class SvgFigure {
public:
    SvgFigure(double width_mm, double height_mm);

    /// World rectangle mapped onto the canvas (uniform scale, centered,
    /// with a small margin). Must be called before adding elements.
    void set_viewport(double xmin, double xmax, double ymin, double ymax);

    void add_polyline(const std::vector<Vec3>& pts, const std::string& stroke,
                      double stroke_mm = 0.25);
    void add_segment(const Vec3& a, const Vec3& b, const std::string& stroke,
                     double stroke_mm = 0.25);
    void add_circle(const Vec3& center, double radius_world, const std::string& stroke,
                    double stroke_mm = 0.25);
    void add_dot(const Vec3& p, double radius_mm, const std::string& fill);
    void add_label(const Vec3& p, const std::string& text, double size_mm = 3.0);

    /// Serialize; includes a scale bar in the bottom margin.
    std::string to_string() const;

private:
    struct Elem {
        std::string body;
    };
    double to_px_x(double x) const;
    double to_px_y(double y) const;
    double scale() const { return scale_; }

    double width_mm_, height_mm_;
    double xmin_{0}, xmax_{1}, ymin_{0}, ymax_{1};
    double scale_{1};  // mm per world unit
    double ox_{0}, oy_{0};
    std::vector<Elem> elems_;
};

/// Write text atomically (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace caustica
