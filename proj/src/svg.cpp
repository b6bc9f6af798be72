#include "caustica/svg.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace caustica {

namespace {

std::string num(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate in SVG figure");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

SvgFigure::SvgFigure(double width_mm, double height_mm)
    : width_mm_(width_mm), height_mm_(height_mm) {}

void SvgFigure::set_viewport(double xmin, double xmax, double ymin, double ymax) {
    xmin_ = xmin;
    xmax_ = xmax;
    ymin_ = ymin;
    ymax_ = ymax;
    const double margin = 8.0;  // mm, leaves room for the scale bar
    const double avail_w = width_mm_ - 2 * margin;
    const double avail_h = height_mm_ - 2 * margin - 6.0;
    const double sx = avail_w / std::max(xmax - xmin, 1e-12);
    const double sy = avail_h / std::max(ymax - ymin, 1e-12);
    scale_ = std::min(sx, sy);
    ox_ = margin + 0.5 * (avail_w - scale_ * (xmax - xmin));
    oy_ = margin + 0.5 * (avail_h - scale_ * (ymax - ymin));
}

double SvgFigure::to_px_x(double x) const { return ox_ + scale_ * (x - xmin_); }
double SvgFigure::to_px_y(double y) const { return oy_ + scale_ * (ymax_ - y); }

void SvgFigure::add_polyline(const std::vector<Vec3>& pts, const std::string& stroke,
                             double stroke_mm) {
    if (pts.size() < 2) return;
    std::ostringstream s;
    s << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
      << num(stroke_mm) << "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) s << " ";
        s << num(to_px_x(pts[i].x)) << "," << num(to_px_y(pts[i].y));
    }
    s << "\"/>";
    elems_.push_back({s.str()});
}

void SvgFigure::add_segment(const Vec3& a, const Vec3& b, const std::string& stroke,
                            double stroke_mm) {
    std::ostringstream s;
    s << "<line x1=\"" << num(to_px_x(a.x)) << "\" y1=\"" << num(to_px_y(a.y))
      << "\" x2=\"" << num(to_px_x(b.x)) << "\" y2=\"" << num(to_px_y(b.y))
      << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(stroke_mm) << "\"/>";
    elems_.push_back({s.str()});
}

void SvgFigure::add_circle(const Vec3& center, double radius_world, const std::string& stroke,
                           double stroke_mm) {
    std::ostringstream s;
    s << "<circle cx=\"" << num(to_px_x(center.x)) << "\" cy=\"" << num(to_px_y(center.y))
      << "\" r=\"" << num(scale_ * radius_world) << "\" fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(stroke_mm) << "\"/>";
    elems_.push_back({s.str()});
}

void SvgFigure::add_dot(const Vec3& p, double radius_mm, const std::string& fill) {
    std::ostringstream s;
    s << "<circle cx=\"" << num(to_px_x(p.x)) << "\" cy=\"" << num(to_px_y(p.y)) << "\" r=\""
      << num(radius_mm) << "\" fill=\"" << fill << "\"/>";
    elems_.push_back({s.str()});
}

void SvgFigure::add_label(const Vec3& p, const std::string& text, double size_mm) {
    std::ostringstream s;
    s << "<text x=\"" << num(to_px_x(p.x)) << "\" y=\"" << num(to_px_y(p.y))
      << "\" font-family=\"sans-serif\" font-size=\"" << num(size_mm) << "\">" << text
      << "</text>";
    elems_.push_back({s.str()});
}

std::string SvgFigure::to_string() const {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << num(width_mm_) << "mm\" height=\"" << num(height_mm_) << "mm\" viewBox=\"0 0 "
      << num(width_mm_) << " " << num(height_mm_) << "\">\n";
    s << "<rect width=\"" << num(width_mm_) << "\" height=\"" << num(height_mm_)
      << "\" fill=\"white\"/>\n";
    for (const auto& e : elems_) s << e.body << "\n";

    // Scale bar: a round world length that fits a quarter of the canvas.
    const double target_world = 0.25 * width_mm_ / scale_;
    const double decade = std::pow(10.0, std::floor(std::log10(target_world)));
    double bar_world = decade;
    for (double m : {5.0, 2.0, 1.0}) {
        if (m * decade <= target_world) {
            bar_world = m * decade;
            break;
        }
    }
    const double bar_mm = bar_world * scale_;
    const double y = height_mm_ - 5.0;
    s << "<line x1=\"8\" y1=\"" << num(y) << "\" x2=\"" << num(8 + bar_mm) << "\" y2=\""
      << num(y) << "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
    s << "<text x=\"" << num(8 + bar_mm + 2) << "\" y=\"" << num(y + 1.2)
      << "\" font-family=\"sans-serif\" font-size=\"3\">" << num(bar_world) << " m</text>\n";
    s << "</svg>\n";
    return s.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot create " + tmp);
        f.write(text.data(), std::streamsize(text.size()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot write " + path + ": " + ec.message());
    }
}

}  // namespace caustica
