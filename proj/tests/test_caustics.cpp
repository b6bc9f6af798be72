#include <doctest.h>

#include "caustica/caustics.hpp"

#include <algorithm>

#include "caustica/cylinder.hpp"
#include "oracles.hpp"

using namespace caustica;

namespace {
constexpr double kPi = 3.14159265358979323846;
const Scene kDefault = default_scene();
}  // namespace

TEST_CASE("envelope_2d: parallel rays on a circle focus at R/2 on the axis") {
    const double R = 1.0;
    auto fam = parallel_rays_circle_family(R);
    fam.param_min = -0.9 * R;
    fam.param_max = 0.9 * R;

    // Brute-force oracle: intersect consecutive pairs of actual rays.
    auto brute_fam = fam;
    brute_fam.param_min = -0.01 * R;
    brute_fam.param_max = 0.01 * R;
    const auto brute = oracles::pairwise_envelope(brute_fam, 10000);
    REQUIRE(!brute.empty());
    double best = 1e9;
    Vec3 cusp_oracle;
    for (const auto& p : brute) {
        if (std::abs(p.y) < best) {
            best = std::abs(p.y);
            cusp_oracle = p;
        }
    }
    CHECK(std::abs(std::abs(cusp_oracle.x) - R / 2) < 1e-6 * R);

    // Library envelope agrees near the axis.
    const auto sheet = envelope_2d(fam, 4001);
    const auto& mid = sheet.samples[sheet.samples.size() / 2];
    CHECK(!mid.degenerate);
    CHECK(std::abs(std::abs(mid.point.x) - R / 2) < 1e-6 * R);
    CHECK(std::abs(mid.point.y) < 1e-6 * R);

    // The axial cusp carries a flag even though it falls between samples.
    bool axial_cusp_flagged = false;
    for (const auto& s : sheet.samples)
        if (s.cusp && std::abs(s.param) < 0.01 * R) axial_cusp_flagged = true;
    CHECK(axial_cusp_flagged);
}

TEST_CASE("envelope_2d: point source on the circle yields a closed single-cusp curve") {
    const double R = 1.0;
    const Vec3 src{R, 0, 0};
    auto fam = point_source_circle_family(R, src);
    fam.param_min = 0.03;
    fam.param_max = 2 * kPi - 0.03;
    const auto sheet = envelope_2d(fam, 8001);

    int degenerate = 0;
    std::vector<Vec3> pts;
    for (const auto& s : sheet.samples) {
        degenerate += s.degenerate ? 1 : 0;
        if (!s.degenerate) pts.push_back(s.point);
    }
    CHECK(degenerate == 0);
    // Inside the circle throughout.
    for (const auto& p : pts) CHECK(p.hnorm() < R + 1e-9);
    // Closed: the two ends approach each other (both near the source).
    CHECK((pts.front() - pts.back()).norm() < 0.1 * R);

    // Exactly one cusp cluster (tangent reversal), in the antipodal region.
    std::vector<size_t> cusp_idx;
    for (size_t i = 0; i < sheet.samples.size(); ++i)
        if (sheet.samples[i].cusp) cusp_idx.push_back(i);
    REQUIRE(!cusp_idx.empty());
    int clusters = 1;
    for (size_t i = 1; i < cusp_idx.size(); ++i)
        if (cusp_idx[i] - cusp_idx[i - 1] > 16) ++clusters;
    CHECK(clusters == 1);
    const Vec3 cusp = sheet.samples[cusp_idx[cusp_idx.size() / 2]].point;
    CHECK(cusp.x < 0);  // opposite the source
    // Classical cardioid-type caustic: cusp at distance R/3 from center.
    CHECK(std::abs(cusp.x + R / 3) < 1e-3 * R);
    CHECK(std::abs(cusp.y) < 1e-3 * R);
}

TEST_CASE("envelope_2d: far point source converges to the parallel-ray envelope") {
    const double R = 1.0;
    auto far_fam = point_source_circle_family(R, Vec3{1e6 * R, 0, 0});
    // Reflections on the far (concave-from-source) wall around azimuth pi.
    far_fam.param_min = kPi - 1.1;
    far_fam.param_max = kPi + 1.1;
    const auto far_sheet = envelope_2d(far_fam, 2001);

    auto par_fam = parallel_rays_circle_family(R);
    par_fam.param_min = -0.92 * R;
    par_fam.param_max = 0.92 * R;
    const auto par_sheet = envelope_2d(par_fam, 4001);

    // Pointwise: each far-source envelope point is close to the parallel
    // envelope (nearest distance to the polyline, not just its vertices).
    const auto seg_dist = [](const Vec3& p, const Vec3& a, const Vec3& b) {
        const Vec3 ab = b - a;
        const double len2 = ab.norm2();
        double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return (p - (a + t * ab)).norm();
    };
    int checked = 0;
    for (size_t i = 0; i < far_sheet.samples.size(); i += 50) {
        const auto& s = far_sheet.samples[i];
        if (s.degenerate || s.point.hnorm() > 0.8 * R) continue;
        double best = 1e9;
        for (size_t k = 0; k + 1 < par_sheet.samples.size(); ++k) {
            if (par_sheet.samples[k].degenerate || par_sheet.samples[k + 1].degenerate)
                continue;
            best = std::min(best,
                            seg_dist(s.point, par_sheet.samples[k].point,
                                     par_sheet.samples[k + 1].point));
        }
        CHECK(best < 1e-4 * R);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("envelope_2d: parallel neighbors are flagged, not fabricated") {
    // A flat mirror keeps parallel rays parallel: every envelope sample is
    // degenerate (point at infinity).
    RayFamily1D flat;
    flat.param_min = -1.0;
    flat.param_max = 1.0;
    flat.at = [](double b) { return Ray{Vec3{0.0, b, 0.0}, Vec3{1, 0, 0}}; };
    const auto sheet = envelope_2d(flat, 101);
    for (const auto& s : sheet.samples) CHECK(s.degenerate);
}

TEST_CASE("envelope_2d: samples are continuous away from flagged cusps") {
    const double R = 1.0;
    auto fam = point_source_circle_family(R, Vec3{0.5 * R, 0, 0});
    fam.param_min = 0.0;
    fam.param_max = 2 * kPi;
    const auto sheet = envelope_2d(fam, 4001);
    // Local sampling density: median gap over the sheet.
    std::vector<double> gaps;
    for (size_t i = 1; i < sheet.samples.size(); ++i) {
        if (sheet.samples[i].degenerate || sheet.samples[i - 1].degenerate) continue;
        gaps.push_back((sheet.samples[i].point - sheet.samples[i - 1].point).norm());
    }
    REQUIRE(gaps.size() > 3000);
    // Local sampling density: median over a sliding window of gaps.
    const auto local_median = [&](size_t k) {
        const size_t lo = k > 25 ? k - 25 : 0;
        const size_t hi = std::min(k + 26, gaps.size());
        std::vector<double> w(gaps.begin() + lo, gaps.begin() + hi);
        std::nth_element(w.begin(), w.begin() + w.size() / 2, w.end());
        return w[w.size() / 2];
    };
    size_t gi = 0;
    for (size_t i = 1; i < sheet.samples.size(); ++i) {
        if (sheet.samples[i].degenerate || sheet.samples[i - 1].degenerate) continue;
        const double gap = gaps[gi];
        const double med = local_median(gi);
        ++gi;
        const bool near_cusp = sheet.samples[i].cusp || sheet.samples[i - 1].cusp ||
                               (i >= 2 && sheet.samples[i - 2].cusp) ||
                               (i + 1 < sheet.samples.size() && sheet.samples[i + 1].cusp);
        // Envelope speed varies smoothly along the finite caustic: allow
        // 10x the local density except right at cusps, and ignore the
        // unbounded branch where neighbor rays turn parallel.
        const bool finite_branch = sheet.samples[i].point.hnorm() < 2 * R &&
                                   sheet.samples[i - 1].point.hnorm() < 2 * R;
        if (!near_cusp && finite_branch) CHECK(gap < 10.0 * med + 1e-12);
    }
}

TEST_CASE("envelope_2d: rotation equivariance") {
    const double R = 1.0;
    const double rot = 0.7;
    const Vec3 src{0.5 * R, 0.1 * R, 0};
    const Vec3 src_rot{src.x * std::cos(rot) - src.y * std::sin(rot),
                       src.x * std::sin(rot) + src.y * std::cos(rot), 0};
    auto fam = point_source_circle_family(R, src);
    fam.param_min = 0.0;
    fam.param_max = 2 * kPi;
    auto fam_rot = point_source_circle_family(R, src_rot);
    fam_rot.param_min = rot;
    fam_rot.param_max = 2 * kPi + rot;
    const auto a = envelope_2d(fam, 2001);
    const auto b = envelope_2d(fam_rot, 2001);
    // The envelope point is a cross-ray intersection at finite-difference
    // step 1e-6 of the span; its rotation equivariance is limited by that
    // truncation for ill-conditioned (distant) points, so compare at 1e-7
    // and skip points far outside the mirror circle.
    for (size_t i = 0; i < a.samples.size(); i += 37) {
        if (a.samples[i].degenerate || b.samples[i].degenerate) continue;
        const Vec3& p = a.samples[i].point;
        if (p.hnorm() > 1.5 * R) continue;
        const Vec3 p_rot{p.x * std::cos(rot) - p.y * std::sin(rot),
                         p.x * std::sin(rot) + p.y * std::cos(rot), 0};
        CHECK((p_rot - b.samples[i].point).norm() < 1e-7);
    }
}

TEST_CASE("focal_points_on_chief_ray: flat mirror has no isolated degeneracy") {
    // Mirror x = 0, source on +x: every fan focuses at the single mirror
    // image, the determinant never changes sign.
    const Vec3 src{0.3, 0, 0.2};
    RayFamily2D flat;
    flat.at = [src](double u, double v) {
        const Vec3 p{0.0, u, v};
        return Ray{p, reflect(normalized(p - src), Vec3{1, 0, 0})};
    };
    FocalScanOptions opts;
    opts.t_min = -3.0;
    opts.t_max = -1e-4;
    opts.samples = 20000;
    const auto f = focal_points_on_chief_ray(flat, 0.0, 0.2, opts);
    CHECK(!f.has_value());
}

TEST_CASE("focal_points_on_chief_ray: cylinder V root equals the tangent-plane image") {
    const Vec3 P = cylinder_point(kDefault, {0.35, 0.07});
    const auto T = trace_to_table(kDefault, P);
    REQUIRE(T.has_value());
    const auto family = cylinder_reflection_family(kDefault, *T);
    FocalScanOptions opts;
    const double d_eye = (kDefault.eye - P).norm();
    opts.t_min = -10 * d_eye;
    opts.t_max = -1e-5;
    opts.samples = 20000;
    const auto f = focal_points_on_chief_ray(family, 0.35, 0.07, opts);
    REQUIRE(f.has_value());
    CHECK(std::abs(-f->t_v - (*T - P).norm()) / (*T - P).norm() < 1e-6);
}

TEST_CASE("focal_points_on_chief_ray: head-on infinite eye puts t_h at R/2") {
    Scene s = kDefault;
    s.eye = Vec3{1e7 * s.radius, 0, 0.40};
    const Vec3 P{s.radius, 0, 0.05};
    const auto T = trace_to_table(s, P);
    REQUIRE(T.has_value());
    const auto family = cylinder_reflection_family(s, *T);
    FocalScanOptions opts;
    opts.t_min = -1.0;
    opts.t_max = -1e-6;
    opts.samples = 200000;
    const auto f = focal_points_on_chief_ray(family, 0.0, 0.05, opts);
    REQUIRE(f.has_value());
    // Chief ray is nearly horizontal here, so arclength ~ depth.
    CHECK(-f->t_h == doctest::Approx(s.radius / 2).epsilon(1e-3));
}

TEST_CASE("rainbow_deviation: axial ray bounces straight back") {
    CHECK(rainbow_deviation(1.333, 0.0) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("rainbow: minimum location, angle, and one-sided fold") {
    const RainbowMinimum m = rainbow_minimum(1.333);
    CHECK(m.b == doctest::Approx(0.8608).epsilon(2e-4));
    const double angle_deg = 180.0 - m.deviation * 180.0 / kPi;
    CHECK(std::abs(angle_deg - 42.0) < 0.1);

    // Grid-scan oracle agrees with the golden-section result.
    double best_b = 0, best_dev = 1e9;
    const int N = 200000;
    for (int i = 1; i < N; ++i) {
        const double b = double(i) / N;
        const double dv = rainbow_deviation(1.333, b);
        if (dv < best_dev) {
            best_dev = dv;
            best_b = b;
        }
    }
    CHECK(std::abs(best_b - m.b) < 2.0 / N);
    CHECK(std::abs(best_dev - m.deviation) < 1e-9);

    // Exit-angle histogram for uniform b: empty below the fold, piling up
    // at it, monotonically falling off inside.
    const int kBins = 24;
    std::vector<long> hist(kBins, 0);
    const double lo = m.deviation, hi = kPi;
    const int samples = 1000000;
    for (int i = 0; i < samples; ++i) {
        const double b = (i + 0.5) / samples;
        const double dv = rainbow_deviation(1.333, b);
        CHECK(dv >= m.deviation - 1e-12);  // nothing beyond the fold
        int bin = int((dv - lo) / (hi - lo) * kBins);
        if (bin >= 0 && bin < kBins) ++hist[bin];
    }
    for (int k = 1; k < kBins; ++k) CHECK(hist[k] <= hist[k - 1]);
    CHECK(hist[0] > hist[kBins - 1] * 3);
}

TEST_CASE("rainbow: unique minimum for a range of indices") {
    for (double n : {1.1, 1.25, 1.333, 1.5, 1.8, 1.95}) {
        int sign_changes = 0;
        const int N = 100000;
        double prev = rainbow_deviation(n, 1.5 / N) - rainbow_deviation(n, 0.5 / N);
        for (int i = 1; i < N - 1; ++i) {
            const double d = rainbow_deviation(n, (i + 1.5) / N) -
                             rainbow_deviation(n, (i + 0.5) / N);
            if ((prev < 0) != (d < 0)) ++sign_changes;
            prev = d;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("blur_spot: pinhole limit has no spread") {
    const Vec3 P = cylinder_point(kDefault, {0.0, 0.06});
    const auto T = trace_to_table(kDefault, P);
    REQUIRE(T.has_value());
    const auto spot = blur_spot(kDefault, 0.0, 0.45, *T, P, 9);
    REQUIRE(spot.has_value());
    CHECK(spot->sigma_major < 1e-12);
    CHECK(spot->sigma_minor < 1e-12);
}

TEST_CASE("blur_spot: orientation flips between the two foci") {
    const Vec3 P = cylinder_point(kDefault, {0.0, 0.06});
    const auto T = trace_to_table(kDefault, P);
    REQUIRE(T.has_value());
    const auto pair = image_pair(kDefault, P, *T);
    REQUIRE(pair.has_value());
    const double dist_h = (kDefault.eye - pair->h_point).norm();
    const double dist_v = (kDefault.eye - pair->v_point).norm();
    REQUIRE(dist_h < dist_v);

    const auto at_h = blur_spot(kDefault, 0.004, dist_h, *T, P);
    REQUIRE(at_h.has_value());
    CHECK(at_h->orientation == SpotOrientation::Vertical);
    CHECK(at_h->sigma_major / at_h->sigma_minor > 3.0);
    CHECK(at_h->occluded_fraction == 0.0);

    const auto at_v = blur_spot(kDefault, 0.004, dist_v, *T, P);
    REQUIRE(at_v.has_value());
    CHECK(at_v->orientation == SpotOrientation::Horizontal);
    CHECK(at_v->sigma_major / at_v->sigma_minor > 3.0);

    // Exactly one aspect-ratio crossing while sweeping focus h -> v.
    int crossings = 0;
    double prev_log = 0;
    bool have_prev = false;
    for (int i = 0; i <= 40; ++i) {
        const double f = dist_h + (dist_v - dist_h) * i / 40.0;
        const auto sp = blur_spot(kDefault, 0.004, f, *T, P, 21);
        REQUIRE(sp.has_value());
        const double vert = sp->orientation == SpotOrientation::Vertical
                                ? sp->sigma_major / sp->sigma_minor
                                : sp->sigma_minor / sp->sigma_major;
        const double lg = std::log(vert);
        if (have_prev && (prev_log > 0) != (lg > 0)) ++crossings;
        if (lg != 0) {
            prev_log = lg;
            have_prev = true;
        }
    }
    CHECK(crossings == 1);
}
