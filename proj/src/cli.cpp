#include "caustica/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "caustica/caustics.hpp"
#include "caustica/csv.hpp"
#include "caustica/cylinder.hpp"
#include "caustica/image.hpp"
#include "caustica/svg.hpp"
#include "caustica/units.hpp"
#include "caustica/water.hpp"

namespace caustica::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double rad) { return rad * 180.0 / kPi; }

/// Unit-suffixed option bound to a string; resolved after parsing.
struct LengthOpt {
    std::string text;
    bool set() const { return !text.empty(); }
};

double need_length(const LengthOpt& o, const char* flag) {
    auto v = parse_length(o.text);
    if (!v) throw CLI::ValidationError(std::string(flag) + ": expected a length like 25cm, 10ft, 0.3m");
    return *v;
}

double need_angle(const std::string& text, const char* flag) {
    auto v = parse_angle(text);
    if (!v) throw CLI::ValidationError(std::string(flag) + ": expected an angle like 35deg or 0.6rad");
    return *v;
}

/// Shared tube-scene flags; precedence flags > config file > defaults.
struct SceneFlags {
    std::string config;
    LengthOpt radius, height, eye_x, eye_y, eye_z, eye_distance;
    std::string eye_from{"surface"};

    void attach(CLI::App* cmd) {
        cmd->add_option("--scene", config, "scene config file (key=value)");
        cmd->add_option("--radius", radius.text, "tube radius (default 2.5cm)");
        cmd->add_option("--tube-height", height.text, "tube height (default 15cm)");
        cmd->add_option("--eye-x", eye_x.text, "eye x (table frame)");
        cmd->add_option("--eye-y", eye_y.text, "eye y");
        cmd->add_option("--eye-z", eye_z.text, "eye height above the table (default 40cm)");
        cmd->add_option("--eye-distance", eye_distance.text,
                        "horizontal eye distance from the tube (default 25cm)");
        cmd->add_option("--eye-from", eye_from, "measure --eye-distance from: surface|axis")
            ->check(CLI::IsMember({"surface", "axis"}));
    }

    Scene resolve() const {
        Scene s = config.empty() ? default_scene(false) : load_scene_config(config);
        if (radius.set()) s.radius = need_length(radius, "--radius");
        if (height.set()) s.height = need_length(height, "--tube-height");
        if (eye_distance.set()) {
            const double d = need_length(eye_distance, "--eye-distance");
            s.eye.x = eye_from == "axis" ? d : d + s.radius;
            s.eye.y = 0.0;
        }
        if (eye_x.set()) s.eye.x = need_length(eye_x, "--eye-x");
        if (eye_y.set()) s.eye.y = need_length(eye_y, "--eye-y");
        if (eye_z.set()) s.eye.z = need_length(eye_z, "--eye-z");
        if (!s.valid())
            throw CLI::ValidationError("scene: eye must be outside the tube and above the table");
        return s;
    }
};

void save_raster(const RasterImage& img, const std::string& path) {
    // PNG primary; PPM fallback when the extension asks for it.
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".ppm") save_ppm(img, path);
    else save_png(img, path);
}

int fail(const std::string& line) {
    std::cerr << line << "\n";
    return 1;
}

void emit(const std::string& key, double value) {
    std::cout << key << "=" << format_double(value) << "\n";
}

void emit_count(const std::string& key, long long value) {
    std::cout << key << "=" << value << "\n";
}

void emit(const std::string& key, const std::string& value) {
    std::cout << key << "=" << value << "\n";
}

nlohmann::json scene_json(const Scene& s) {
    return {{"eye_x", s.eye.x}, {"eye_y", s.eye.y}, {"eye_z", s.eye.z},
            {"radius", s.radius}, {"height", s.height}};
}

int run_anamorph(const AnamorphArgs& a) {
    auto built = AnamorphMap::build(a.kind, a.scene, a.source_width, a.source_height,
                                    a.flat_standoff);
    if (std::holds_alternative<AnamorphBuildError>(built)) {
        const auto& e = std::get<AnamorphBuildError>(built);
        return fail("error=" + e.code + " " + e.detail);
    }
    const auto& map = std::get<AnamorphMap>(built);

    RasterImage src;
    try {
        src = load_image(a.image_path);
    } catch (const std::exception& e) {
        return fail(std::string("error=image_io detail=") + e.what());
    }

    RenderStats stats;
    RasterImage table = render(map, src, a.dpi, &stats, a.threads);

    nlohmann::json side;
    side["command"] = "anamorph";
    side["kind"] = to_string(a.kind);
    side["scene"] = scene_json(a.scene);
    side["dpi"] = a.dpi;
    side["source_width"] = a.source_width;
    side["source_height"] = a.source_height;
    side["coverage_fraction"] =
        double(stats.mapped_pixels) / double(std::max<long long>(stats.total_pixels, 1));
    side["unreachable_pixels"] = stats.unreachable_pixels;
    side["region"] = {{"xmin", stats.region[0]}, {"xmax", stats.region[1]},
                      {"ymin", stats.region[2]}, {"ymax", stats.region[3]}};

    try {
        if (a.sheet) {
            auto laid = sheet_layout(table, stats, *a.sheet, a.scene.radius);
            if (std::holds_alternative<SheetLayoutError>(laid)) {
                const auto& e = std::get<SheetLayoutError>(laid);
                std::ostringstream line;
                line << "error=" << e.code
                     << " required_width_mm=" << format_double(e.required_width_mm)
                     << " required_height_mm=" << format_double(e.required_height_mm);
                return fail(line.str());
            }
            const auto& lay = std::get<SheetLayout>(laid);
            save_raster(lay.sheet, a.out_path);
            side["sheet"] = *a.sheet == SheetSize::A4 ? "a4" : "letter";
            side["circle_center_px"] = {lay.circle_center_x, lay.circle_center_y};
            side["circle_diameter_px"] = lay.circle_diameter_px;
            side["scale_bar_px"] = {{"x", lay.bar_x}, {"y", lay.bar_y},
                                    {"w", lay.bar_w}, {"h", lay.bar_h}};
            side["content_offset_px"] = {lay.content_x, lay.content_y};
        } else {
            save_raster(table, a.out_path);
        }
        const std::string sidecar =
            a.sidecar_path.empty() ? a.out_path + ".json" : a.sidecar_path;
        write_text_atomic(sidecar, side.dump(2) + "\n");
    } catch (const std::exception& e) {
        return fail(std::string("error=io detail=") + e.what());
    }

    emit_count("mapped_pixels", stats.mapped_pixels);
    emit_count("total_pixels", stats.total_pixels);
    emit("coverage_fraction", side["coverage_fraction"].get<double>());
    return 0;
}

int run_caustic2d(const Caustic2DArgs& a) {
    RayFamily1D family;
    double par0, par1;
    if (a.mode == "parallel") {
        family = parallel_rays_circle_family(a.radius);
        par0 = -a.radius * 0.995;
        par1 = a.radius * 0.995;
    } else {
        family = point_source_circle_family(a.radius, Vec3{a.source_x, a.source_y, 0});
        const double saz = std::atan2(a.source_y, a.source_x);
        par0 = saz + 0.02;
        par1 = saz + 2 * kPi - 0.02;
    }
    RayFamily1D window = family;
    window.param_min = par0;
    window.param_max = par1;
    const CausticSheet sheet = envelope_2d(window, a.samples);

    int cusps = 0, degenerate = 0;
    for (const auto& s : sheet.samples) {
        cusps += s.cusp ? 1 : 0;
        degenerate += s.degenerate ? 1 : 0;
    }

    if (!a.out_csv.empty()) {
        CsvWriter csv({"parameter", "x", "y", "z"});
        for (const auto& s : sheet.samples) {
            if (s.degenerate) continue;
            csv.row({s.param, s.point.x, s.point.y, s.point.z});
        }
        write_text_atomic(a.out_csv, csv.str());
    }

    if (!a.out_svg.empty()) {
        SvgFigure fig(160, 160);
        const double R = a.radius;
        fig.set_viewport(-2.2 * R, 2.2 * R, -2.2 * R, 2.2 * R);
        fig.add_circle(Vec3{0, 0, 0}, R, "black", 0.4);
        for (int i = 0; i < a.rays; ++i) {
            const double u = par0 + (par1 - par0) * (i + 0.5) / a.rays;
            const Ray r = window.at(u);
            fig.add_segment(r.origin, r.origin + 3.0 * R * r.dir, "#2b7bba", 0.08);
        }
        std::vector<Vec3> run;
        for (const auto& s : sheet.samples) {
            if (s.degenerate || s.point.hnorm() > 2.0 * R) {
                if (run.size() > 1) fig.add_polyline(run, "#d62728", 0.5);
                run.clear();
                continue;
            }
            run.push_back(s.point);
        }
        if (run.size() > 1) fig.add_polyline(run, "#d62728", 0.5);
        if (a.mode != "parallel") fig.add_dot(Vec3{a.source_x, a.source_y, 0}, 1.2, "black");
        write_text_atomic(a.out_svg, fig.to_string());
    }

    emit_count("samples", (long long)sheet.samples.size());
    emit_count("cusps", cusps);
    emit_count("degenerate", degenerate);
    return 0;
}

int run_rainbow(const RainbowArgs& a) {
    if (a.n <= 1.0) return fail("error=bad_index detail=n_must_exceed_1");
    const RainbowMinimum m = rainbow_minimum(a.n);
    emit("n", a.n);
    emit("b_min", m.b);
    emit("deviation_min_deg", deg(m.deviation));
    emit("rainbow_angle_deg", 180.0 - deg(m.deviation));

    if (!a.out_csv.empty()) {
        CsvWriter csv({"b", "deviation_deg"});
        for (int i = 0; i < a.samples; ++i) {
            const double b = (i + 0.5) / a.samples;
            csv.row({b, deg(rainbow_deviation(a.n, b))});
        }
        write_text_atomic(a.out_csv, csv.str());
    }

    if (!a.out_svg.empty()) {
        // Ray fan through the drop: refract in, one internal reflection,
        // refract out; the exit fan folds at the rainbow angle.
        SvgFigure fig(160, 160);
        fig.set_viewport(-2.6, 2.2, -2.6, 2.2);
        fig.add_circle(Vec3{0, 0, 0}, 1.0, "black", 0.4);
        const int nrays = 60;
        for (int i = 0; i < nrays; ++i) {
            const double b = (i + 0.5) / nrays;
            const double si = b, ci = std::sqrt(1 - b * b);
            const Vec3 entry{ci, b, 0};
            const Vec3 d_in{-1, 0, 0};
            const auto t1 = refract(d_in, entry, Interface{1.0, a.n});
            if (!t1) continue;
            // chord to the far wall: reflect there, then exit.
            const double chord = -2.0 * dot(*t1, entry);
            const Vec3 p2 = entry + chord * *t1;
            const Vec3 n2 = p2;  // unit for the unit circle
            const Vec3 d2 = reflect(*t1, n2);
            const double chord2 = -2.0 * dot(d2, p2);
            const Vec3 p3 = p2 + chord2 * d2;
            const auto t3 = refract(d2, -p3, Interface{a.n, 1.0});
            if (!t3) continue;
            fig.add_segment(entry + Vec3{1.5, 0, 0}, entry, "#2b7bba", 0.08);
            fig.add_segment(entry, p2, "#2b7bba", 0.08);
            fig.add_segment(p2, p3, "#2b7bba", 0.08);
            fig.add_segment(p3, p3 + 2.0 * *t3, "#d62728", 0.08);
        }
        write_text_atomic(a.out_svg, fig.to_string());
    }
    return 0;
}

int run_virtual_surface(const VirtualSurfaceArgs& a) {
    const VirtualSurface surf = virtual_surface(a.scene, a.azimuth_samples, a.height_samples);
    if (!a.out_csv.empty()) {
        CsvWriter csv({"azimuth", "height", "x", "y", "z"});
        for (const auto& s : surf.samples)
            csv.row({s.param.azimuth, s.param.height, s.h_point.x, s.h_point.y, s.h_point.z});
        write_text_atomic(a.out_csv, csv.str());
    }
    if (!a.out_svg.empty()) {
        // Top view: tube footprint plus horizontal cross-sections of the
        // interior image surface at a few heights.
        SvgFigure fig(160, 160);
        const double R = a.scene.radius;
        fig.set_viewport(-1.4 * R, 1.4 * R, -1.4 * R, 1.4 * R);
        fig.add_circle(Vec3{0, 0, 0}, R, "black", 0.4);
        // One polyline per sampled height, every few rows.
        const int stride = std::max(a.height_samples / 6, 1);
        std::vector<Vec3> sect;
        double cur_h = -1;
        int row = -1;
        const auto flush = [&] {
            if (sect.size() > 1 && row % stride == 0)
                fig.add_polyline(sect, "#d62728", 0.35);
            sect.clear();
        };
        for (const auto& s : surf.samples) {
            if (s.param.height != cur_h) {
                flush();
                cur_h = s.param.height;
                ++row;
            }
            sect.push_back(Vec3{s.h_point.x, s.h_point.y, 0});
        }
        flush();
        write_text_atomic(a.out_svg, fig.to_string());
    }
    emit_count("samples", (long long)surf.samples.size());
    emit_count("skipped", surf.skipped);
    return 0;
}

int run_blur_spot(const BlurSpotArgs& a) {
    const Vec3 P = cylinder_point(a.scene, {a.point_azimuth, a.point_height});
    const auto T = trace_to_table(a.scene, P);
    if (!T) return fail("error=degenerate_chief_ray detail=no_table_hit");
    const auto pair = image_pair(a.scene, P, *T);
    if (!pair) return fail("error=degenerate_chief_ray detail=grazing");

    const double dist_h = (a.scene.eye - pair->h_point).norm();
    const double dist_v = (a.scene.eye - pair->v_point).norm();
    double focus = dist_h;
    if (a.focus == "v") focus = dist_v;
    else if (a.focus != "h") {
        auto v = parse_length(a.focus);
        if (!v) return fail("error=bad_focus detail=" + a.focus);
        focus = *v;
    }

    const auto spot = blur_spot(a.scene, a.aperture, focus, *T, P);
    if (!spot) return fail("error=aperture_occlusion detail=no_valid_rays");

    if (!a.out_csv.empty()) {
        CsvWriter csv({"parameter", "x", "y", "z"});
        for (size_t i = 0; i < spot->points.size(); ++i)
            csv.row({double(i), spot->points[i].x, spot->points[i].y, 0.0});
        write_text_atomic(a.out_csv, csv.str());
    }

    if (!a.out_svg.empty()) {
        SvgFigure fig(120, 120);
        double ext = 1e-6;
        for (const auto& p : spot->points) ext = std::max({ext, std::abs(p.x), std::abs(p.y)});
        fig.set_viewport(-1.1 * ext, 1.1 * ext, -1.1 * ext, 1.1 * ext);
        for (const auto& p : spot->points) fig.add_dot(Vec3{p.x, p.y, 0}, 0.4, "#2b7bba");
        write_text_atomic(a.out_svg, fig.to_string());
    }

    emit("focus_distance", focus);
    emit("distance_h", dist_h);
    emit("distance_v", dist_v);
    // Midpoint focus: reported without an H/V label since neither fan is
    // sharp there.
    emit("circle_of_least_confusion_distance", 0.5 * (dist_h + dist_v));
    emit("sigma_major", spot->sigma_major);
    emit("sigma_minor", spot->sigma_minor);
    emit("orientation",
         spot->orientation == SpotOrientation::Vertical ? "vertical" : "horizontal");
    emit("occluded_fraction", spot->occluded_fraction);
    return 0;
}

int run_pool(const PoolArgs& a) {
    WaterScene ws;
    ws.eye = Vec3{0, 0, a.eye_height};
    ws.floor_depth = a.depth;

    const auto slopes = pool_local_slopes(ws, a.gaze);
    if (!slopes) return fail("error=bad_gaze detail=outside_(0,90)deg");

    std::vector<double> gazes;
    for (int i = 0; i < a.gaze_steps; ++i)
        gazes.push_back((a.gaze_min_deg +
                         (a.gaze_max_deg - a.gaze_min_deg) * double(i) /
                             std::max(a.gaze_steps - 1, 1)) *
                        kPi / 180.0);
    const auto rows = pool_floor_profile(ws, gazes);

    if (!a.out_csv.empty()) {
        CsvWriter csv({"gaze_deg", "floor_x", "floor_z", "h_x", "h_z", "v_x", "v_z",
                       "backproj_x", "backproj_z"});
        for (const auto& r : rows)
            csv.row({deg(r.gaze), r.floor_point.x, r.floor_point.z, r.h_point.x, r.h_point.z,
                     r.v_point.x, r.v_point.z, r.back_projection.x, r.back_projection.z});
        write_text_atomic(a.out_csv, csv.str());
    }

    if (!a.out_svg.empty()) {
        SvgFigure fig(200, 120);
        double xmax = 1;
        for (const auto& r : rows) xmax = std::max(xmax, r.floor_point.x);
        fig.set_viewport(0, xmax, -a.depth * 1.1, a.eye_height * 1.1);
        fig.add_segment(Vec3{0, 0, 0} , Vec3{xmax, 0, 0}, "#2b7bba", 0.3);  // surface
        fig.add_segment(Vec3{0, -a.depth, 0}, Vec3{xmax, -a.depth, 0}, "black", 0.3);
        fig.add_dot(Vec3{0, a.eye_height, 0}, 1.0, "black");
        auto curve = [&](auto pick, const char* color) {
            std::vector<Vec3> pts;
            for (const auto& r : rows) pts.push_back(Vec3{pick(r).x, pick(r).z, 0});
            fig.add_polyline(pts, color, 0.4);
        };
        curve([](const PoolProfileRow& r) { return r.h_point; }, "#d62728");
        curve([](const PoolProfileRow& r) { return r.v_point; }, "#2ca02c");
        curve([](const PoolProfileRow& r) { return r.back_projection; }, "#9467bd");
        write_text_atomic(a.out_svg, fig.to_string());
    }

    const auto row35 = pool_floor_profile(ws, {a.gaze});
    emit("gaze_deg", deg(a.gaze));
    emit("slope_h_deg", deg(slopes->h));
    emit("slope_v_deg", deg(slopes->v));
    emit("slope_backprojection_deg", deg(slopes->back));
    if (!row35.empty()) {
        emit("apparent_depth_h", -row35[0].h_point.z);
        emit("apparent_depth_v", -row35[0].v_point.z);
    }
    return 0;
}

int run_ruler(const RulerArgs& a) {
    WaterScene ws;
    ws.eye = Vec3{0, 0, a.eye_height};
    ws.floor_depth = a.length;
    const RulerShape shape = ruler_apparent_shape(ws, a.standoff, a.length, a.samples);
    if (shape.h_curve.empty()) return fail("error=no_visible_samples");

    if (!a.out_csv.empty()) {
        CsvWriter csv({"depth", "h_x", "h_z", "v_x", "v_z"});
        for (size_t i = 0; i < shape.depths.size(); ++i)
            csv.row({shape.depths[i], shape.h_curve[i].x, shape.h_curve[i].z,
                     shape.v_curve[i].x, shape.v_curve[i].z});
        write_text_atomic(a.out_csv, csv.str());
    }
    if (!a.out_svg.empty()) {
        SvgFigure fig(160, 160);
        fig.set_viewport(a.standoff - a.length, a.standoff + 0.2 * a.length,
                         -1.2 * a.length, 0.3 * a.length);
        fig.add_segment(Vec3{a.standoff - a.length, 0, 0},
                        Vec3{a.standoff + 0.2 * a.length, 0, 0}, "#2b7bba", 0.3);
        fig.add_segment(Vec3{a.standoff, 0, 0}, Vec3{a.standoff, -a.length, 0}, "black", 0.5);
        std::vector<Vec3> hc, vc;
        for (size_t i = 0; i < shape.h_curve.size(); ++i) {
            hc.push_back(Vec3{shape.h_curve[i].x, shape.h_curve[i].z, 0});
            vc.push_back(Vec3{shape.v_curve[i].x, shape.v_curve[i].z, 0});
        }
        fig.add_polyline(hc, "#d62728", 0.4);
        fig.add_polyline(vc, "#2ca02c", 0.4);
        write_text_atomic(a.out_svg, fig.to_string());
    }

    // Bowing of the tangential image: distance of the deepest sample from
    // the chord through the first and last samples.
    const Vec3 a0{shape.h_curve.front().x, shape.h_curve.front().z, 0};
    const Vec3 a1{shape.h_curve.back().x, shape.h_curve.back().z, 0};
    const Vec3 chord = a1 - a0;
    double max_dev = 0;
    for (const auto& p : shape.h_curve) {
        const Vec3 q{p.x, p.z, 0};
        const double dev = std::abs(cross2(chord, q - a0)) / chord.hnorm();
        max_dev = std::max(max_dev, dev);
    }
    emit_count("samples", (long long)shape.depths.size());
    emit_count("dropped", shape.dropped);
    emit("h_max_deviation_from_line", max_dev);
    return 0;
}

int run_archer(const ArcherArgs& a) {
    WaterScene ws;
    ws.eye = Vec3{0, 0, -a.eye_depth};

    if (a.apparent_angle) {
        const double th = *a.apparent_angle;
        const Vec3 dir{std::sin(th), 0.0, std::cos(th)};
        const auto out = archer_emergent_direction(ws, dir);
        if (!out) {
            std::ostringstream line;
            line << "error=outside_snells_window angle_deg=" << format_double(deg(th));
            return fail(line.str());
        }
        const double air = std::acos(std::clamp(out->z, -1.0, 1.0));
        emit("apparent_deg", deg(th));
        emit("true_deg", deg(air));
        emit("correction_deg", deg(air - th));
        return 0;
    }

    const auto sol = archer_aim(ws, *a.target);
    if (!sol) return fail("error=bad_target detail=target_must_be_above_surface");
    emit("apparent_deg", deg(sol->water_angle));
    emit("true_deg", deg(std::acos(std::clamp(sol->true_dir.z, -1.0, 1.0))));
    emit("correction_deg", deg(sol->correction));
    return 0;
}

}  // namespace

std::variant<Command, UsageError> parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Cylindrical-mirror anamorphs, caustics, and air-water imaging"};
    app.name("caustica");
    app.require_subcommand(1);

    // anamorph
    auto* an = app.add_subcommand("anamorph", "build a printable anamorph sheet");
    std::string an_kind = "3d", an_image, an_out, an_sidecar, an_sheet = "a4";
    LengthOpt an_w, an_h, an_standoff;
    double an_dpi = 300.0;
    int an_threads = 0;
    SceneFlags an_scene;
    an->add_option("--kind", an_kind, "erect|3d|flat")
        ->required()
        ->check(CLI::IsMember({"erect", "3d", "flat"}));
    an->add_option("--image", an_image, "source image (PNG or PPM)")->required();
    an->add_option("--out", an_out, "output PNG path")->required();
    an->add_option("--sidecar", an_sidecar, "JSON sidecar path (default <out>.json)");
    an->add_option("--dpi", an_dpi, "print resolution (default 300)");
    an->add_option("--source-width", an_w.text, "physical width of the source image (default 6cm)");
    an->add_option("--source-height", an_h.text, "physical height (default 6cm)");
    an->add_option("--flat-standoff", an_standoff.text,
                   "flat kind: gap between tube and image bottom (default 1cm)");
    an->add_option("--sheet", an_sheet, "a4|letter|none (default a4)")
        ->check(CLI::IsMember({"a4", "letter", "none"}));
    an->add_option("--threads", an_threads, "render workers (default: hardware)");
    an_scene.attach(an);

    // caustic2d
    auto* ca = app.add_subcommand("caustic2d", "envelope of a planar reflected ray family");
    Caustic2DArgs ca_args;
    ca->add_option("--mode", ca_args.mode, "point|parallel")->check(CLI::IsMember({"point", "parallel"}));
    ca->add_option("--radius", ca_args.radius, "mirror circle radius (default 1)");
    ca->add_option("--source-x", ca_args.source_x, "point-source x (default 0.5)");
    ca->add_option("--source-y", ca_args.source_y, "point-source y (default 0)");
    ca->add_option("--rays", ca_args.rays, "rays drawn in the figure (default 240)");
    ca->add_option("--samples", ca_args.samples, "envelope parameter samples (default 2048)");
    ca->add_option("--out-svg", ca_args.out_svg, "figure path");
    ca->add_option("--out-csv", ca_args.out_csv, "envelope CSV path");

    // rainbow
    auto* rb = app.add_subcommand("rainbow", "drop deviation minimum and caustic fan");
    RainbowArgs rb_args;
    rb->add_option("--n", rb_args.n, "refractive index (default 1.333)");
    rb->add_option("--samples", rb_args.samples, "CSV samples over b (default 100000)");
    rb->add_option("--out-csv", rb_args.out_csv, "deviation CSV path");
    rb->add_option("--out-svg", rb_args.out_svg, "ray-fan figure path");

    // virtual-surface
    auto* vs = app.add_subcommand("virtual-surface", "interior image surface of the tube");
    VirtualSurfaceArgs vs_args;
    SceneFlags vs_scene;
    vs->add_option("--azimuth-samples", vs_args.azimuth_samples, "default 64");
    vs->add_option("--height-samples", vs_args.height_samples, "default 24");
    vs->add_option("--out-csv", vs_args.out_csv, "surface CSV path");
    vs->add_option("--out-svg", vs_args.out_svg, "cross-section figure path");
    vs_scene.attach(vs);

    // blur-spot
    auto* bs = app.add_subcommand("blur-spot", "finite-aperture astigmatic blur");
    BlurSpotArgs bs_args;
    SceneFlags bs_scene;
    LengthOpt bs_aperture, bs_height;
    std::string bs_azimuth = "0deg";
    bs->add_option("--aperture", bs_aperture.text, "aperture diameter (default 4mm)");
    bs->add_option("--focus", bs_args.focus, "h|v|<distance> (default h)");
    bs->add_option("--height", bs_height.text, "reflection point height (default 6cm)");
    bs->add_option("--azimuth", bs_azimuth, "reflection point azimuth (default 0deg)");
    bs->add_option("--out-csv", bs_args.out_csv, "spot cloud CSV path");
    bs->add_option("--out-svg", bs_args.out_svg, "spot cloud figure path");
    bs_scene.attach(bs);

    // pool
    auto* pl = app.add_subcommand("pool", "apparent slope of a pool floor");
    PoolArgs pl_args;
    LengthOpt pl_eye, pl_depth;
    std::string pl_gaze = "35deg";
    pl->add_option("--eye-height", pl_eye.text, "eye height above the water (default 10ft)");
    pl->add_option("--depth", pl_depth.text, "pool depth (default 10ft)");
    pl->add_option("--gaze", pl_gaze, "gaze below horizontal (default 35deg)");
    pl->add_option("--gaze-min", pl_args.gaze_min_deg, "profile start, degrees (default 5)");
    pl->add_option("--gaze-max", pl_args.gaze_max_deg, "profile end, degrees (default 85)");
    pl->add_option("--gaze-steps", pl_args.gaze_steps, "profile rows (default 81)");
    pl->add_option("--out-csv", pl_args.out_csv, "profile CSV path");
    pl->add_option("--out-svg", pl_args.out_svg, "profile figure path");

    // ruler
    auto* ru = app.add_subcommand("ruler", "apparent shape of a submerged ruler");
    RulerArgs ru_args;
    LengthOpt ru_eye, ru_standoff, ru_length;
    ru->add_option("--eye-height", ru_eye.text, "eye height above the water (default 15cm)");
    ru->add_option("--standoff", ru_standoff.text, "horizontal ruler distance (default 60cm)");
    ru->add_option("--length", ru_length.text, "submerged length (default 30cm)");
    ru->add_option("--samples", ru_args.samples, "samples along the ruler (default 40)");
    ru->add_option("--out-csv", ru_args.out_csv, "curves CSV path");
    ru->add_option("--out-svg", ru_args.out_svg, "figure path");

    // archer
    auto* ar = app.add_subcommand("archer", "archer-fish aiming through the surface");
    LengthOpt ar_depth, ar_tx, ar_tz;
    std::string ar_apparent;
    ar->add_option("--eye-depth", ar_depth.text, "fish eye depth below the surface (default 30cm)");
    ar->add_option("--target-x", ar_tx.text, "target horizontal offset");
    ar->add_option("--target-z", ar_tz.text, "target height above the surface");
    ar->add_option("--apparent", ar_apparent, "underwater gaze angle from vertical (e.g. 45deg)");

    std::vector<const char*> argv;
    argv.push_back("caustica");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(int(argv.size()), argv.data());

        if (an->parsed()) {
            AnamorphArgs out;
            out.kind = *anamorph_kind_from_string(an_kind);
            out.image_path = an_image;
            out.out_path = an_out;
            out.sidecar_path = an_sidecar;
            out.scene = an_scene.resolve();
            out.dpi = an_dpi;
            if (an_w.set()) out.source_width = need_length(an_w, "--source-width");
            if (an_h.set()) out.source_height = need_length(an_h, "--source-height");
            if (an_standoff.set()) out.flat_standoff = need_length(an_standoff, "--flat-standoff");
            if (an_sheet == "a4") out.sheet = SheetSize::A4;
            else if (an_sheet == "letter") out.sheet = SheetSize::Letter;
            out.threads = an_threads;
            return Command{out};
        }
        if (ca->parsed()) return Command{ca_args};
        if (rb->parsed()) return Command{rb_args};
        if (vs->parsed()) {
            vs_args.scene = vs_scene.resolve();
            return Command{vs_args};
        }
        if (bs->parsed()) {
            bs_args.scene = bs_scene.resolve();
            if (bs_aperture.set()) bs_args.aperture = need_length(bs_aperture, "--aperture");
            if (bs_height.set()) bs_args.point_height = need_length(bs_height, "--height");
            bs_args.point_azimuth = need_angle(bs_azimuth, "--azimuth");
            return Command{bs_args};
        }
        if (pl->parsed()) {
            if (pl_eye.set()) pl_args.eye_height = need_length(pl_eye, "--eye-height");
            if (pl_depth.set()) pl_args.depth = need_length(pl_depth, "--depth");
            pl_args.gaze = need_angle(pl_gaze, "--gaze");
            return Command{pl_args};
        }
        if (ru->parsed()) {
            if (ru_eye.set()) ru_args.eye_height = need_length(ru_eye, "--eye-height");
            if (ru_standoff.set()) ru_args.standoff = need_length(ru_standoff, "--standoff");
            if (ru_length.set()) ru_args.length = need_length(ru_length, "--length");
            return Command{ru_args};
        }
        if (ar->parsed()) {
            ArcherArgs out;
            if (ar_depth.set()) out.eye_depth = need_length(ar_depth, "--eye-depth");
            const bool have_point = ar_tx.set() || ar_tz.set();
            if (!ar_apparent.empty() && have_point)
                throw CLI::ValidationError("archer: give either --apparent or --target-x/--target-z");
            if (ar_apparent.empty() && !have_point)
                throw CLI::ValidationError("archer: need --apparent or --target-x/--target-z");
            if (!ar_apparent.empty()) {
                out.apparent_angle = need_angle(ar_apparent, "--apparent");
            } else {
                if (!ar_tx.set() || !ar_tz.set())
                    throw CLI::ValidationError("archer: need both --target-x and --target-z");
                out.target = Vec3{need_length(ar_tx, "--target-x"), 0.0,
                                  need_length(ar_tz, "--target-z")};
            }
            return Command{out};
        }
        return UsageError{"no subcommand", 2};
    } catch (const CLI::CallForHelp&) {
        return UsageError{app.help(), 0};
    } catch (const CLI::ParseError& e) {
        return UsageError{e.what(), 2};
    } catch (const SceneConfigError& e) {
        return UsageError{e.what(), 2};
    }
}

int run(const Command& cmd) {
    return std::visit(
        [](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, AnamorphArgs>) return run_anamorph(c);
            else if constexpr (std::is_same_v<T, Caustic2DArgs>) return run_caustic2d(c);
            else if constexpr (std::is_same_v<T, RainbowArgs>) return run_rainbow(c);
            else if constexpr (std::is_same_v<T, VirtualSurfaceArgs>) return run_virtual_surface(c);
            else if constexpr (std::is_same_v<T, BlurSpotArgs>) return run_blur_spot(c);
            else if constexpr (std::is_same_v<T, PoolArgs>) return run_pool(c);
            else if constexpr (std::is_same_v<T, RulerArgs>) return run_ruler(c);
            else return run_archer(c);
        },
        cmd);
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = parse_args(args);
    if (std::holds_alternative<UsageError>(parsed)) {
        const auto& e = std::get<UsageError>(parsed);
        (e.exit_code == 0 ? std::cout : std::cerr) << e.message << "\n";
        return e.exit_code;
    }
    try {
        return run(std::get<Command>(parsed));
    } catch (const std::exception& e) {
        std::cerr << "error=internal detail=" << e.what() << "\n";
        return 1;
    }
}

}  // namespace caustica::cli
