// Acceptance suite: one self-contained check per shipped guarantee, one
// pass/fail line each, nonzero exit if any fails. Oracles here are
// independent of the implementation paths they verify.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "caustica/anamorph.hpp"
#include "caustica/caustics.hpp"
#include "caustica/cylinder.hpp"
#include "caustica/geometry.hpp"
#include "caustica/image.hpp"
#include "caustica/scene.hpp"
#include "caustica/units.hpp"
#include "caustica/water.hpp"

#include "oracles.hpp"

using namespace caustica;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFt = 0.3048;
int g_failures = 0;

struct Criterion {
    const char* name;
    std::function<bool(std::string&)> body;
    double budget_s{0};  // 0 = no stated runtime budget
};

void report(const char* name, bool ok, double seconds, const std::string& detail) {
    std::printf("%-4s %-38s %7.2fs  %s\n", ok ? "PASS" : "FAIL", name, seconds,
                detail.c_str());
    if (!ok) ++g_failures;
}

const Scene kScene = default_scene();

// 1. Flat-image theorem: V images of table sources lie exactly on the table.
bool flat_image_theorem(std::string& detail) {
    auto g = oracles::rng(101);
    std::uniform_real_distribution<double> az(-1.1, 1.1), h(0.003, 0.14);
    double worst = 0;
    int n = 0;
    while (n < 1000) {
        const Vec3 P = cylinder_point(kScene, {az(g), h(g)});
        const auto T = trace_to_table(kScene, P);
        if (!T) continue;
        const auto pair = image_pair(kScene, P, *T);
        if (!pair) continue;
        ++n;
        worst = std::max(worst, std::abs(pair->v_point.z));
    }
    detail = "max |z| = " + format_double(worst) + " m over 1000 table sources";
    return worst < 1e-12;
}

// 2. The 2:1 interior-surface limit with the eye retreated head-on.
bool two_to_one_limit(std::string& detail) {
    Scene s = kScene;
    s.eye = Vec3{1e6 * s.radius, 0.0, 0.40};
    double max_x = 0, max_y = 0;
    for (int i = 0; i <= 2000; ++i) {
        const double azm = (visible_azimuth_limit(s) * 0.99999) * (2.0 * i / 2000.0 - 1.0);
        const Vec3 P = cylinder_point(s, {azm, 0.05});
        const auto T = trace_to_table(s, P);
        if (!T) continue;
        const auto pair = image_pair(s, P, *T);
        if (!pair) continue;
        max_x = std::max(max_x, pair->h_point.x);
        max_y = std::max(max_y, std::abs(pair->h_point.y));
    }
    const double ratio = max_x / max_y;
    detail = "depth/width = " + format_double(ratio);
    return std::abs(ratio - 0.5) < 1e-3;
}

// 3. Collinearity: both images sit on the eye-P sight line.
bool collinearity(std::string& detail) {
    auto g = oracles::rng(103);
    std::uniform_real_distribution<double> az(-1.1, 1.1), h(0.003, 0.14);
    double worst = 0;
    int n = 0;
    while (n < 1000) {
        const Vec3 P = cylinder_point(kScene, {az(g), h(g)});
        const auto T = trace_to_table(kScene, P);
        if (!T) continue;
        const auto pair = image_pair(kScene, P, *T);
        if (!pair) continue;
        ++n;
        const Vec3 w = normalized(P - kScene.eye);
        for (const Vec3& img : {pair->h_point, pair->v_point}) {
            const Vec3 d = img - kScene.eye;
            worst = std::max(worst, (d - dot(d, w) * w).norm());
        }
    }
    detail = "max transverse deviation = " + format_double(worst) + " m";
    return worst < 1e-9;
}

// 4. Closed-form focal distances vs the vanishing-Jacobian oracle.
bool oracle_equivalence(std::string& detail) {
    auto g = oracles::rng(104);
    std::uniform_real_distribution<double> az(-0.9, 0.9), h(0.02, 0.13);
    double worst = 0;
    int n = 0;
    while (n < 100) {
        const Vec3 P = cylinder_point(kScene, {az(g), h(g)});
        const auto T = trace_to_table(kScene, P);
        if (!T) continue;
        const auto pair = image_pair(kScene, P, *T);
        if (!pair) continue;
        const auto family = cylinder_reflection_family(kScene, *T);
        FocalScanOptions opts;
        const double d_eye = (kScene.eye - P).norm();
        opts.t_min = -10 * d_eye;
        opts.t_max = -1e-5;
        opts.samples = 10000;
        const auto f = focal_points_on_chief_ray(family, std::atan2(P.y, P.x), P.z, opts);
        if (!f) return false;
        ++n;
        const double c_h = (pair->h_point - P).norm();
        const double c_v = (pair->v_point - P).norm();
        worst = std::max(worst, std::abs(-f->t_h - c_h) / c_h);
        worst = std::max(worst, std::abs(-f->t_v - c_v) / c_v);
    }
    detail = "max relative error = " + format_double(worst) + " over 100 chief rays";
    return worst < 1e-4;
}

// 5. Catacaustic cusp of parallel rays on a circle at R/2.
bool catacaustic_cusp(std::string& detail) {
    const double R = 1.0;
    auto fam = parallel_rays_circle_family(R);
    fam.param_min = -0.02 * R;
    fam.param_max = 0.02 * R;
    const auto pts = oracles::pairwise_envelope(fam, 10000);
    if (pts.empty()) return false;
    double best = 1e9;
    Vec3 cusp;
    for (const auto& p : pts) {
        if (std::abs(p.y) < best) {
            best = std::abs(p.y);
            cusp = p;
        }
    }
    const double err = std::abs(std::abs(cusp.x) - R / 2);
    detail = "cusp at |x| = " + format_double(std::abs(cusp.x)) + " (target R/2)";
    return err < 1e-6 * R;
}

// 6. Rainbow angle and the one-sided fold of the exit fan.
bool rainbow(std::string& detail) {
    const RainbowMinimum m = rainbow_minimum(1.333);
    const double angle = 180.0 - m.deviation * 180.0 / kPi;
    bool ok = std::abs(angle - 42.0) <= 0.1;

    const int kBins = 24;
    std::vector<long> hist(kBins, 0);
    const int samples = 400000;
    bool none_beyond = true;
    for (int i = 0; i < samples; ++i) {
        const double b = (i + 0.5) / samples;
        const double dv = rainbow_deviation(1.333, b);
        if (dv < m.deviation - 1e-12) none_beyond = false;
        const int bin = int((dv - m.deviation) / (kPi - m.deviation) * kBins);
        if (bin >= 0 && bin < kBins) ++hist[bin];
    }
    bool monotone = true;
    for (int k = 1; k < kBins; ++k)
        if (hist[k] > hist[k - 1]) monotone = false;
    detail = "angle = " + format_double(angle) + " deg; fold one-sided = " +
             (none_beyond ? "yes" : "no") + ", falloff monotone = " + (monotone ? "yes" : "no");
    return ok && none_beyond && monotone;
}

// 7. Pool slope at the quoted geometry plus the paraxial limit.
bool pool_slope(std::string& detail) {
    WaterScene ws;
    ws.eye = Vec3{0, 0, 10 * kFt};
    ws.floor_depth = 10 * kFt;
    const auto slopes = pool_local_slopes(ws, 35.0 * kPi / 180.0);
    if (!slopes) return false;
    const double back_deg = slopes->back * 180.0 / kPi;
    const bool quoted = std::abs(back_deg - 10.0) <= 2.0;

    const auto flat = pool_local_slopes(ws, 89.9 * kPi / 180.0);
    const auto rows = pool_floor_profile(ws, {kPi / 2});
    if (!flat || rows.size() != 1) return false;
    const double paraxial_slope = std::abs(flat->h * 180.0 / kPi);
    const double apparent = -rows[0].h_point.z;
    const bool paraxial =
        paraxial_slope < 0.2 && std::abs(apparent - ws.floor_depth / 1.333) < 1e-6;
    detail = "back-projected slope = " + format_double(back_deg) +
             " deg (tangential = " + format_double(slopes->h * 180.0 / kPi) +
             ", sagittal = " + format_double(slopes->v * 180.0 / kPi) +
             "); paraxial depth = " + format_double(apparent);
    return quoted && paraxial;
}

// 8. Astigmatism flip between the two focal distances.
bool astigmatism_flip(std::string& detail) {
    const Vec3 P = cylinder_point(kScene, {0.0, 0.06});
    const auto T = trace_to_table(kScene, P);
    if (!T) return false;
    const auto pair = image_pair(kScene, P, *T);
    if (!pair) return false;
    const double dist_h = (kScene.eye - pair->h_point).norm();
    const double dist_v = (kScene.eye - pair->v_point).norm();

    const auto at_h = blur_spot(kScene, 0.004, dist_h, *T, P);
    const auto at_v = blur_spot(kScene, 0.004, dist_v, *T, P);
    if (!at_h || !at_v) return false;
    const bool vertical_at_h = at_h->orientation == SpotOrientation::Vertical &&
                               at_h->sigma_major / at_h->sigma_minor > 3.0;
    const bool horizontal_at_v = at_v->orientation == SpotOrientation::Horizontal;

    int crossings = 0;
    double prev = 0;
    bool have_prev = false;
    for (int i = 0; i <= 60; ++i) {
        const auto sp =
            blur_spot(kScene, 0.004, dist_h + (dist_v - dist_h) * i / 60.0, *T, P, 21);
        if (!sp) return false;
        const double vert = sp->orientation == SpotOrientation::Vertical
                                ? sp->sigma_major / sp->sigma_minor
                                : sp->sigma_minor / sp->sigma_major;
        const double lg = std::log(vert);
        if (have_prev && (prev > 0) != (lg > 0)) ++crossings;
        if (lg != 0) {
            prev = lg;
            have_prev = true;
        }
    }
    detail = "focus@H -> " + std::string(vertical_at_h ? "vertical" : "NOT vertical") +
             ", focus@V -> " + (horizontal_at_v ? "horizontal" : "NOT horizontal") +
             ", aspect crossings = " + std::to_string(crossings);
    return vertical_at_h && horizontal_at_v && crossings == 1;
}

// 9. Anamorph round trip at full sheet scale.
bool anamorph_round_trip(std::string& detail) {
    auto built = AnamorphMap::build(AnamorphKind::ThreeD, kScene, 0.06, 0.10);
    if (!std::holds_alternative<AnamorphMap>(built)) {
        detail = "map build failed: " + std::get<AnamorphBuildError>(built).detail;
        return false;
    }
    const auto& map = std::get<AnamorphMap>(built);

    // Dot grid: forward-mapped centroids must match the render.
    const int N = 600;
    RasterImage src;
    src.resize_fill(N, N, 255, 255, 255);
    std::vector<SourcePoint> dots;
    for (int gy = 0; gy < 7; ++gy)
        for (int gx = 0; gx < 7; ++gx) {
            const int cx = N * (2 * gx + 1) / 14, cy = N * (2 * gy + 1) / 14;
            for (int dy = -4; dy <= 4; ++dy)
                for (int dx = -4; dx <= 4; ++dx)
                    if (dx * dx + dy * dy <= 16) {
                        auto* p = src.px(cx + dx, cy + dy);
                        p[0] = p[1] = p[2] = 0;
                    }
            dots.push_back({0.06 * ((cx + 0.5) / double(N) - 0.5),
                            0.10 * (1.0 - (cy + 0.5) / double(N))});
        }

    const double dpi = 300;
    RenderStats stats;
    const RasterImage sheet = render(map, src, dpi, &stats);
    const bool big_enough = (long long)sheet.width * sheet.height >= 3000000;

    const double px_m = 0.0254 / dpi;
    double rms = 0;
    int found = 0;
    for (const auto& d : dots) {
        const auto T = map.forward(d);
        if (!T) continue;
        const double pi_ = (T->y - stats.region[2]) / px_m - 0.5;
        const double pj_ = (stats.region[1] - T->x) / px_m - 0.5;
        double sx = 0, sy = 0, wsum = 0;
        const int rad = 18;
        for (int y = std::max(0, int(pj_) - rad); y <= std::min(sheet.height - 1, int(pj_) + rad); ++y)
            for (int x = std::max(0, int(pi_) - rad); x <= std::min(sheet.width - 1, int(pi_) + rad); ++x) {
                const double dark = 255.0 - sheet.px(x, y)[0];
                sx += dark * x;
                sy += dark * y;
                wsum += dark;
            }
        if (wsum < 1) continue;
        ++found;
        const double ex = sx / wsum - pi_, ey = sy / wsum - pj_;
        rms += ex * ex + ey * ey;
    }
    if (found < int(dots.size())) return false;
    rms = std::sqrt(rms / found);

    // Un-warp reconstruction with a smooth source.
    RasterImage smooth;
    smooth.resize_fill(N, N, 0, 0, 0);
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) {
            auto* p = smooth.px(x, y);
            p[0] = std::uint8_t(127.5 + 100 * std::sin(6.28318 * x / N));
            p[1] = std::uint8_t(127.5 + 100 * std::cos(6.28318 * y / N));
            p[2] = std::uint8_t(127.5 + 90 * std::sin(4.4 * (x + y) / N));
        }
    RenderStats stats2;
    const RasterImage sheet2 = render(map, smooth, dpi, &stats2);
    double sum2 = 0;
    long long count = 0;
    for (int y = 16; y < N - 16; y += 2)
        for (int x = 16; x < N - 16; x += 2) {
            const SourcePoint sp{0.06 * ((x + 0.5) / double(N) - 0.5),
                                 0.10 * (1.0 - (y + 0.5) / double(N))};
            const auto T = map.forward(sp);
            if (!T) continue;
            const double pi_ = (T->y - stats2.region[2]) / px_m - 0.5;
            const double pj_ = (stats2.region[1] - T->x) / px_m - 0.5;
            const auto c = bilinear_sample(sheet2, pi_, pj_);
            const auto* s = smooth.px(x, y);
            for (int ch = 0; ch < 3; ++ch) {
                const double e = (c[ch] - s[ch]) / 255.0;
                sum2 += e * e;
            }
            count += 3;
        }
    const double recon_rms = std::sqrt(sum2 / std::max<long long>(count, 1));

    detail = "centroid RMS = " + format_double(rms) + " px; reconstruction RMS = " +
             format_double(recon_rms * 100) + "% of range; sheet " +
             std::to_string(sheet.width) + "x" + std::to_string(sheet.height);
    return big_enough && rms < 0.5 && recon_rms < 0.02;
}

// 10. Snell's window boundary and the overhead null correction.
bool snells_window(std::string& detail) {
    WaterScene ws;
    ws.eye = Vec3{0, 0, -0.3};
    const auto try_angle = [&](double theta) {
        return archer_emergent_direction(ws, Vec3{std::sin(theta), 0, std::cos(theta)})
            .has_value();
    };
    double lo = 40.0 * kPi / 180, hi = 60.0 * kPi / 180;
    if (!try_angle(lo) || try_angle(hi)) return false;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (try_angle(mid) ? lo : hi) = mid;
    }
    const double boundary_deg = 0.5 * (lo + hi) * 180.0 / kPi;
    const bool boundary_ok = std::abs(boundary_deg - 48.61) <= 0.01;

    const auto overhead = archer_aim(ws, Vec3{0, 0, 1.0});
    const bool overhead_ok = overhead && overhead->correction < 1e-12;
    detail = "window boundary = " + format_double(boundary_deg) +
             " deg; overhead correction = " +
             (overhead ? format_double(overhead->correction) : std::string("n/a")) + " rad";
    return boundary_ok && overhead_ok;
}

// 11. Byte-identical CLI artifacts across repeat runs and worker counts.
bool determinism(std::string& detail) {
    RasterImage src;
    src.resize_fill(64, 64, 200, 200, 200);
    for (int y = 8; y < 56; ++y)
        for (int x = 8; x < 56; ++x) {
            auto* p = src.px(x, y);
            p[0] = std::uint8_t(40 + 3 * x);
            p[1] = std::uint8_t(30 + 3 * y);
            p[2] = 60;
        }
    save_png(src, "acc_det_src.png");

    const std::string an =
        "anamorph --kind flat --image acc_det_src.png --dpi 150 --source-width 3cm "
        "--source-height 4cm --sheet a4 ";
    auto a1 = oracles::run_cli(an + "--out acc_det1.png --threads 1", "acc1");
    auto a2 = oracles::run_cli(an + "--out acc_det2.png --threads 5", "acc2");
    const bool png_same = a1.status == 0 && a2.status == 0 &&
                          oracles::read_file("acc_det1.png") ==
                              oracles::read_file("acc_det2.png") &&
                          oracles::read_file("acc_det1.png.json") ==
                              oracles::read_file("acc_det2.png.json");

    auto c1 = oracles::run_cli("caustic2d --out-svg acc_c1.svg --out-csv acc_c1.csv", "accc1");
    auto c2 = oracles::run_cli("caustic2d --out-svg acc_c2.svg --out-csv acc_c2.csv", "accc2");
    const bool svg_same = c1.status == 0 && c2.status == 0 &&
                          oracles::read_file("acc_c1.svg") == oracles::read_file("acc_c2.svg") &&
                          oracles::read_file("acc_c1.csv") == oracles::read_file("acc_c2.csv");

    auto p1 = oracles::run_cli("pool --out-csv acc_p1.csv", "accp1");
    auto p2 = oracles::run_cli("pool --out-csv acc_p2.csv", "accp2");
    const bool csv_same = p1.status == 0 && p2.status == 0 &&
                          oracles::read_file("acc_p1.csv") == oracles::read_file("acc_p2.csv") &&
                          p1.out == p2.out;

    std::remove("acc_det_src.png");
    detail = std::string("png+sidecar ") + (png_same ? "identical" : "DIFFER") + ", svg+csv " +
             (svg_same ? "identical" : "DIFFER") + ", pool csv " +
             (csv_same ? "identical" : "DIFFER");
    return png_same && svg_same && csv_same;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 flat-image theorem", flat_image_theorem, 1.0},
        {"2 two-to-one interior limit", two_to_one_limit, 1.0},
        {"3 sight-line collinearity", collinearity, 0},
        {"4 focal-point oracle equivalence", oracle_equivalence, 10.0},
        {"5 catacaustic cusp at R/2", catacaustic_cusp, 5.0},
        {"6 rainbow angle and fold", rainbow, 0},
        {"7 pool slope and paraxial depth", pool_slope, 0},
        {"8 astigmatism flip", astigmatism_flip, 0},
        {"9 anamorph round trip", anamorph_round_trip, 30.0},
        {"10 Snell's window", snells_window, 0},
        {"11 artifact determinism", determinism, 0},
    };
    for (const auto& c : criteria) {
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.budget_s > 0 && secs > c.budget_s) {
            ok = false;
            detail += " [over " + format_double(c.budget_s) + "s budget]";
        }
        report(c.name, ok, secs, detail);
    }
    return g_failures == 0 ? 0 : 1;
}
