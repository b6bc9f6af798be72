#include "caustica/anamorph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "caustica/cylinder.hpp"
#include "caustica/units.hpp"

namespace caustica {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kArcRows = 513;   // azimuth samples of the arc-length table
constexpr int kArcCols = 513;   // height samples
constexpr double kSpanSafety = 0.999;  // stay off the exact silhouette

double wrap_pi(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a < -kPi) a += 2 * kPi;
    return a;
}

}  // namespace

const char* to_string(AnamorphKind k) {
    switch (k) {
        case AnamorphKind::Erect: return "erect";
        case AnamorphKind::ThreeD: return "3d";
        case AnamorphKind::Flat: return "flat";
    }
    return "?";
}

std::optional<AnamorphKind> anamorph_kind_from_string(const std::string& s) {
    if (s == "erect") return AnamorphKind::Erect;
    if (s == "3d" || s == "threed" || s == "3D") return AnamorphKind::ThreeD;
    if (s == "flat") return AnamorphKind::Flat;
    return std::nullopt;
}

double AnamorphMap::arclen_at(double phi, double z) const {
    const auto clampd = [](double v, double lo, double hi) {
        return v < lo ? lo : (v > hi ? hi : v);
    };
    const double fi = clampd((phi - arc_phi0_) / arc_dphi_, 0.0, double(arc_rows_ - 1));
    const double fj = clampd((z - arc_z0_) / arc_dz_, 0.0, double(arc_cols_ - 1));
    const int i0 = std::min(int(fi), arc_rows_ - 2);
    const int j0 = std::min(int(fj), arc_cols_ - 2);
    const double ai = fi - i0, aj = fj - j0;
    const auto at = [&](int i, int j) { return arc_table_[size_t(i) * arc_cols_ + j]; };
    return (1 - ai) * ((1 - aj) * at(i0, j0) + aj * at(i0, j0 + 1)) +
           ai * ((1 - aj) * at(i0 + 1, j0) + aj * at(i0 + 1, j0 + 1));
}

std::optional<double> AnamorphMap::height_for_arclen(double phi, double v) const {
    // The blended column is strictly increasing in z; bisect on j.
    const auto clampd = [](double x, double lo, double hi) {
        return x < lo ? lo : (x > hi ? hi : x);
    };
    const double fi = clampd((phi - arc_phi0_) / arc_dphi_, 0.0, double(arc_rows_ - 1));
    const int i0 = std::min(int(fi), arc_rows_ - 2);
    const double ai = fi - i0;
    const auto col = [&](int j) {
        return (1 - ai) * arc_table_[size_t(i0) * arc_cols_ + j] +
               ai * arc_table_[size_t(i0 + 1) * arc_cols_ + j];
    };
    if (v < 0.0 || v > col(arc_cols_ - 1)) return std::nullopt;
    int lo = 0, hi = arc_cols_ - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (col(mid) <= v) lo = mid;
        else hi = mid;
    }
    const double va = col(lo), vb = col(hi);
    const double frac = vb > va ? (v - va) / (vb - va) : 0.0;
    return arc_z0_ + (lo + frac) * arc_dz_;
}

std::variant<AnamorphMap, AnamorphBuildError> AnamorphMap::build(AnamorphKind kind,
                                                                 const Scene& scene,
                                                                 double source_width,
                                                                 double source_height,
                                                                 double flat_standoff) {
    AnamorphMap m;
    m.kind_ = kind;
    m.scene_ = scene;
    m.width_ = source_width;
    m.height_ = source_height;
    m.eye_az_ = std::atan2(scene.eye.y, scene.eye.x);
    m.flat_standoff_ = flat_standoff;

    if (source_width <= 0 || source_height <= 0)
        return AnamorphBuildError{"region_overflow", "detail=empty_source"};

    const double vis = visible_azimuth_limit(scene) * kSpanSafety;

    if (kind == AnamorphKind::Erect || kind == AnamorphKind::ThreeD) {
        const double half_span = source_width / (2.0 * scene.radius);
        if (half_span > vis) {
            std::ostringstream d;
            d << "width=" << format_double(source_width)
              << " max_width=" << format_double(2.0 * scene.radius * vis);
            return AnamorphBuildError{"region_overflow", d.str()};
        }
    }

    if (kind == AnamorphKind::Erect) {
        if (source_height > scene.height) {
            std::ostringstream d;
            d << "height=" << format_double(source_height)
              << " max_height=" << format_double(scene.height);
            return AnamorphBuildError{"region_overflow", d.str()};
        }
    } else if (kind == AnamorphKind::ThreeD) {
        // Tabulate arc length up the interior-surface sections over the
        // whole visible fan.
        m.arc_rows_ = kArcRows;
        m.arc_cols_ = kArcCols;
        m.arc_phi0_ = m.eye_az_ - vis;
        m.arc_dphi_ = 2.0 * vis / (kArcRows - 1);
        m.arc_z0_ = 0.0;
        m.arc_dz_ = scene.height / (kArcCols - 1);
        m.arc_table_.assign(size_t(kArcRows) * kArcCols, 0.0);
        double min_available = 0.0;
        const double half_span = source_width / (2.0 * scene.radius);
        bool first_in_span = true;
        for (int i = 0; i < kArcRows; ++i) {
            const double phi = m.arc_phi0_ + i * m.arc_dphi_;
            Vec3 prev{scene.radius * std::cos(phi), scene.radius * std::sin(phi), 0.0};
            double acc = 0.0;
            for (int j = 1; j < kArcCols; ++j) {
                const double z = j * m.arc_dz_;
                const Vec3 P = cylinder_point(scene, {phi, z});
                Vec3 h = P;
                if (auto T = trace_to_table(scene, P)) {
                    if (auto pair = image_pair(scene, P, *T)) h = pair->h_point;
                }
                acc += (h - prev).norm();
                m.arc_table_[size_t(i) * kArcCols + j] = acc;
                prev = h;
            }
            if (std::abs(wrap_pi(phi - m.eye_az_)) <= half_span) {
                if (first_in_span || acc < min_available) min_available = acc;
                first_in_span = false;
            }
        }
        if (source_height > min_available) {
            std::ostringstream d;
            d << "height=" << format_double(source_height)
              << " max_height=" << format_double(min_available);
            return AnamorphBuildError{"region_overflow", d.str()};
        }
    } else {
        // Flat: the source rectangle must sit inside the tube's shadow
        // wedge and stay reachable by reflection.
        const int kEdge = 33;
        for (int j = 0; j < kEdge; ++j) {
            for (int i = 0; i < kEdge; ++i) {
                const bool boundary = i == 0 || j == 0 || i == kEdge - 1 || j == kEdge - 1;
                if (!boundary) continue;
                const SourcePoint sp{source_width * (double(i) / (kEdge - 1) - 0.5),
                                     source_height * double(j) / (kEdge - 1)};
                if (!m.forward(sp)) {
                    std::ostringstream d;
                    d << "unreachable_u=" << format_double(sp.u)
                      << " unreachable_v=" << format_double(sp.v);
                    return AnamorphBuildError{"region_overflow", d.str()};
                }
            }
        }
    }
    return m;
}

std::optional<Vec3> AnamorphMap::forward(const SourcePoint& sp) const {
    if (sp.u < -width_ / 2 || sp.u > width_ / 2 || sp.v < 0 || sp.v > height_)
        return std::nullopt;

    if (kind_ == AnamorphKind::Flat) {
        // Lay the source on the table behind the tube and pull each point
        // forward through the tangent-plane mirror.
        const Vec3 xhat{std::cos(eye_az_), std::sin(eye_az_), 0.0};
        const Vec3 yhat{-std::sin(eye_az_), std::cos(eye_az_), 0.0};
        const Vec3 S = (-(scene_.radius + flat_standoff_ + sp.v)) * xhat + sp.u * yhat;
        const Vec3 d = S - scene_.eye;
        const Vec3 d2{d.x, d.y, 0.0};
        const double L2 = d2.hnorm();
        if (L2 <= 0) return std::nullopt;
        auto hit = intersect_cylinder(Ray{Vec3{scene_.eye.x, scene_.eye.y, 0.0}, d2 / L2},
                                      scene_.radius);
        if (!hit || hit->t >= L2) return std::nullopt;  // not in the shadow
        const Vec3 q = hit->point;
        const Vec3 in = d2 / L2;
        const Vec3 r = in - 2.0 * dot2(in, hit->normal) * hit->normal;
        const double s2 = (S - q).hnorm();
        const Vec3 T = q + s2 * r;
        const double s1 = Vec3{q.x - scene_.eye.x, q.y - scene_.eye.y, 0.0}.hnorm();
        const double zp = scene_.eye.z * s2 / (s1 + s2);
        if (zp > scene_.height) return std::nullopt;
        if (table_point_occluded(scene_, T)) return std::nullopt;
        return Vec3{T.x, T.y, 0.0};
    }

    const double phi = eye_az_ + sp.u / scene_.radius;
    double z = sp.v;
    if (kind_ == AnamorphKind::ThreeD) {
        auto zz = height_for_arclen(phi, sp.v);
        if (!zz) return std::nullopt;
        z = *zz;
    }
    const Vec3 P = cylinder_point(scene_, {phi, z});
    auto T = trace_to_table(scene_, P);
    if (!T) return std::nullopt;
    if (table_point_occluded(scene_, *T)) return std::nullopt;
    return T;
}

std::optional<SourcePoint> AnamorphMap::inverse(const Vec3& table_point) const {
    double hint = std::numeric_limits<double>::quiet_NaN();
    return inverse_hinted(table_point, hint);
}

std::optional<SourcePoint> AnamorphMap::inverse_hinted(const Vec3& table_point,
                                                       double& azimuth_hint) const {
    auto P = solve_reflection_point_hinted(scene_, table_point, azimuth_hint);
    if (!P) return std::nullopt;
    const double phi = std::atan2(P->y, P->x);

    if (kind_ == AnamorphKind::Flat) {
        const Vec3 xhat{std::cos(eye_az_), std::sin(eye_az_), 0.0};
        const Vec3 yhat{-std::sin(eye_az_), std::cos(eye_az_), 0.0};
        const Vec3 q{scene_.radius * std::cos(phi), scene_.radius * std::sin(phi), 0.0};
        const Vec3 t2{table_point.x - q.x, table_point.y - q.y, 0.0};
        const Vec3 u2 = normalized(Vec3{q.x - scene_.eye.x, q.y - scene_.eye.y, 0.0});
        const Vec3 S = q + t2.hnorm() * u2;  // tangent-plane mirror of T, on the table
        const SourcePoint sp{dot(S, yhat), -dot(S, xhat) - scene_.radius - flat_standoff_};
        if (sp.u < -width_ / 2 || sp.u > width_ / 2 || sp.v < 0 || sp.v > height_)
            return std::nullopt;
        return sp;
    }

    const double u = scene_.radius * wrap_pi(phi - eye_az_);
    if (u < -width_ / 2 || u > width_ / 2) return std::nullopt;
    double v = P->z;
    if (kind_ == AnamorphKind::ThreeD) v = arclen_at(phi, P->z);
    if (v < 0 || v > height_) return std::nullopt;
    return SourcePoint{u, v};
}

std::array<double, 4> AnamorphMap::table_bounds() const {
    const Vec3 xhat{std::cos(eye_az_), std::sin(eye_az_), 0.0};
    const Vec3 yhat{-std::sin(eye_az_), std::cos(eye_az_), 0.0};
    double xmin = -scene_.radius, xmax = scene_.radius, ymax = scene_.radius;
    const int kN = 257;
    for (int e = 0; e < 4; ++e) {
        for (int k = 0; k < kN; ++k) {
            const double f = double(k) / (kN - 1);
            SourcePoint sp;
            switch (e) {
                case 0: sp = {width_ * (f - 0.5), 0.0}; break;
                case 1: sp = {width_ * (f - 0.5), height_}; break;
                case 2: sp = {-width_ / 2, height_ * f}; break;
                default: sp = {width_ / 2, height_ * f}; break;
            }
            auto T = forward(sp);
            if (!T) continue;
            const double fx = dot(*T, xhat), fy = dot(*T, yhat);
            xmin = std::min(xmin, fx);
            xmax = std::max(xmax, fx);
            ymax = std::max(ymax, std::abs(fy));
        }
    }
    const double pad = 0.005;
    return {xmin - pad, xmax + pad, -(ymax + pad), ymax + pad};
}

RasterImage render(const AnamorphMap& map, const RasterImage& src, double dpi,
                   RenderStats* stats, int workers) {
    auto bounds = map.table_bounds();
    const double px_m = 0.0254 / dpi;
    const int w = std::max(1, int(std::ceil((bounds[3] - bounds[2]) / px_m)));
    const int h = std::max(1, int(std::ceil((bounds[1] - bounds[0]) / px_m)));
    // Center the pixel grid on the mirror plane so a mirrored source maps
    // to exactly mirrored pixels, and snap the region to the grid.
    const double eta_c = 0.5 * (bounds[2] + bounds[3]);
    bounds[2] = eta_c - 0.5 * w * px_m;
    bounds[3] = eta_c + 0.5 * w * px_m;
    bounds[0] = bounds[1] - h * px_m;

    RasterImage out;
    out.dpi = dpi;
    out.resize_fill(w, h, 255, 255, 255);

    const Scene& scene = map.scene();
    const double eye_az = std::atan2(scene.eye.y, scene.eye.x);
    const Vec3 xhat{std::cos(eye_az), std::sin(eye_az), 0.0};
    const Vec3 yhat{-std::sin(eye_az), std::cos(eye_az), 0.0};
    const double W = map.source_width(), H = map.source_height();
    const double stroke = 0.0002;  // footprint circle stroke half-width, m

    int nthreads = workers > 0 ? workers : int(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, h);

    std::vector<long long> mapped(nthreads, 0);
    const auto work = [&](int tid, int row0, int row1) {
        for (int j = row0; j < row1; ++j) {
            const double fx = bounds[1] - (j + 0.5) * px_m;
            // Hint state is row-local so any row partition across workers
            // produces identical bytes.
            double hint = std::numeric_limits<double>::quiet_NaN();
            for (int i = 0; i < w; ++i) {
                const double fy = bounds[2] + (i + 0.5) * px_m;
                std::uint8_t* p = out.px(i, j);
                const double rr = std::hypot(fx, fy);
                if (std::abs(rr - scene.radius) <= stroke) {
                    p[0] = p[1] = p[2] = 0;  // placement circle at true scale
                    continue;
                }
                if (rr < scene.radius) continue;
                const Vec3 T = fx * xhat + fy * yhat;
                auto sp = map.inverse_hinted(T, hint);
                if (!sp) continue;
                ++mapped[tid];
                const double sx = (sp->u + W / 2) / W * src.width - 0.5;
                const double sy = (H - sp->v) / H * src.height - 0.5;
                const auto c = bilinear_sample(src, sx, sy);
                p[0] = std::uint8_t(std::lround(std::clamp(c[0], 0.0, 255.0)));
                p[1] = std::uint8_t(std::lround(std::clamp(c[1], 0.0, 255.0)));
                p[2] = std::uint8_t(std::lround(std::clamp(c[2], 0.0, 255.0)));
            }
        }
    };

    if (nthreads == 1) {
        work(0, 0, h);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        const int chunk = (h + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(work, t, t * chunk, std::min(h, (t + 1) * chunk));
        for (auto& th : pool) th.join();
    }

    if (stats) {
        stats->total_pixels = (long long)w * h;
        stats->mapped_pixels = 0;
        for (long long m : mapped) stats->mapped_pixels += m;
        stats->unreachable_pixels = stats->total_pixels - stats->mapped_pixels;
        stats->region = bounds;
    }
    return out;
}

std::variant<SheetLayout, SheetLayoutError> sheet_layout(const RasterImage& content,
                                                         const RenderStats& stats,
                                                         SheetSize sheet,
                                                         double tube_radius) {
    const double sheet_w_mm = sheet == SheetSize::A4 ? 210.0 : 215.9;
    const double sheet_h_mm = sheet == SheetSize::A4 ? 297.0 : 279.4;
    const double dpi = content.dpi;
    const double px_per_mm = dpi / 25.4;
    const int W = int(std::lround(sheet_w_mm * px_per_mm));
    const int H = int(std::lround(sheet_h_mm * px_per_mm));
    const int margin = int(std::ceil(10.0 * px_per_mm));

    if (content.width + 2 * margin > W || content.height + 2 * margin > H) {
        SheetLayoutError e;
        e.code = "does_not_fit";
        e.required_width_mm = content.width / px_per_mm + 20.0;
        e.required_height_mm = content.height / px_per_mm + 20.0;
        return e;
    }

    SheetLayout lay;
    lay.sheet.dpi = dpi;
    lay.sheet.resize_fill(W, H, 255, 255, 255);
    lay.content_x = (W - content.width) / 2;
    lay.content_y = (H - content.height) / 2;
    for (int y = 0; y < content.height; ++y) {
        std::copy_n(content.px(0, y), size_t(3) * content.width,
                    lay.sheet.px(lay.content_x, lay.content_y + y));
    }

    // Tube placement circle center in sheet pixels (the render put the
    // axis at table frame origin inside stats.region).
    const double px_m = 0.0254 / dpi;
    lay.circle_center_x = lay.content_x + (0.0 - stats.region[2]) / px_m - 0.5;
    lay.circle_center_y = lay.content_y + (stats.region[1] - 0.0) / px_m - 0.5;
    lay.circle_diameter_px = 2.0 * tube_radius / px_m;

    // 10 cm scale bar in the bottom margin band.
    lay.bar_w = int(std::lround(0.1 / px_m));
    lay.bar_h = std::max(2, int(std::lround(2.0 * px_per_mm)));
    lay.bar_x = margin;
    lay.bar_y = H - int(std::lround(8.0 * px_per_mm));
    for (int y = lay.bar_y; y < lay.bar_y + lay.bar_h && y < H; ++y)
        for (int x = lay.bar_x; x < lay.bar_x + lay.bar_w && x < W; ++x) {
            auto* p = lay.sheet.px(x, y);
            p[0] = p[1] = p[2] = 0;
        }
    return lay;
}

}  // namespace caustica
