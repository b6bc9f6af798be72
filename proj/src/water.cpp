#include "caustica/water.hpp"

#include <cmath>

namespace caustica {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCrossingTol = 1e-12;  // meters, on the surface crossing

/// Surface crossing of the chief ray between a point below (z < 0) and a
/// point above (z > 0) the interface. Snell alignment is monotone along
/// the horizontal segment between the two, so plain bisection suffices.
Vec3 chief_crossing(const Vec3& below, const Vec3& above, double n_water) {
    const Vec3 seg{above.x - below.x, above.y - below.y, 0.0};
    const double L = seg.hnorm();
    if (L < 1e-15) return Vec3{below.x, below.y, 0.0};
    const double zb = -below.z, za = above.z;
    const auto misalign = [&](double u) {
        // n_w sin(theta_w) - n_a sin(theta_a) at crossing distance u from `below`.
        const double sw = u / std::hypot(u, zb);
        const double sa = (L - u) / std::hypot(L - u, za);
        return n_water * sw - kNAir * sa;
    };
    double lo = 0.0, hi = L;
    while (hi - lo > kCrossingTol) {
        const double mid = 0.5 * (lo + hi);
        if (misalign(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    const double u = 0.5 * (lo + hi);
    return Vec3{below.x + seg.x * u / L, below.y + seg.y * u / L, 0.0};
}

/// Upward refracted direction at crossing C for light from `below`.
std::optional<Vec3> refract_up(const Vec3& below, const Vec3& C, double n_water) {
    const Vec3 d = normalized(C - below);
    return refract(d, Vec3{0, 0, -1}, Interface{n_water, kNAir});
}

}  // namespace

double snells_window_limit(double n_water) { return std::asin(1.0 / n_water); }

std::optional<RefractedImagePair> apparent_point(const WaterScene& ws, const Vec3& source) {
    if (ws.eye.z <= 0.0 || source.z >= 0.0) return std::nullopt;

    const Vec3 C = chief_crossing(source, ws.eye, ws.n_water);
    const Vec3 horiz{ws.eye.x - source.x, ws.eye.y - source.y, 0.0};
    const double L = horiz.hnorm();
    const Vec3 e_in = L > 1e-12 ? horiz / L : Vec3{1, 0, 0};
    const Vec3 e_out = cross(Vec3{0, 0, 1}, e_in);

    const auto chief_dir = refract_up(source, C, ws.n_water);
    if (!chief_dir) return std::nullopt;

    RefractedImagePair out;
    out.crossing = C;
    out.water_angle = std::acos(std::min(normalized(C - source).z, 1.0));
    out.air_angle = std::acos(std::min(chief_dir->z, 1.0));

    // Step on the scale of the underwater path, not the full baseline:
    // near-grazing chiefs sit close to the critical angle and a large
    // in-plane offset would push the neighbor ray into TIR.
    const double delta = 1e-6 * std::max(-source.z, 1e-3);

    // Tangential: the in-plane fan stays planar, so the two neighbor rays
    // cross at a real point; intersect them in (in-plane, z) coordinates.
    {
        const Vec3 Cp = C + delta * e_in;
        const Vec3 Cm = C - delta * e_in;
        const auto dp = refract_up(source, Cp, ws.n_water);
        const auto dm = refract_up(source, Cm, ws.n_water);
        if (!dp || !dm) return std::nullopt;
        const auto xi = [&](const Vec3& p) { return dot(p - C, e_in); };
        // Line k: (xi, z) = (xi_k, 0) + t (dxi_k, dz_k)
        const double x1 = xi(Cp), x2 = xi(Cm);
        const double u1 = dot(*dp, e_in), w1 = dp->z;
        const double u2 = dot(*dm, e_in), w2 = dm->z;
        const double den = u1 * w2 - w1 * u2;
        if (std::abs(den) < 1e-30) return std::nullopt;
        const double t1 = ((x2 - x1) * w2) / den;
        out.h_point = C + (x1 + t1 * u1) * e_in + Vec3{0, 0, t1 * w1};
    }

    // Sagittal: mirror-symmetric pairs cross on the plane of incidence;
    // follow one offset ray back to where its off-plane coordinate is zero.
    {
        const Vec3 Cq = C + delta * e_out;
        const auto dq = refract_up(source, Cq, ws.n_water);
        if (!dq) return std::nullopt;
        const double eta_out = dot(*dq, e_out);
        if (std::abs(eta_out) < 1e-30) return std::nullopt;
        const double t = -delta / eta_out;
        const Vec3 p = Cq + t * *dq;
        // Project exactly onto the plane of incidence.
        out.v_point = p - dot(p - C, e_out) * e_out;
    }

    return out;
}

std::vector<PoolProfileRow> pool_floor_profile(const WaterScene& ws,
                                               const std::vector<double>& gaze_angles) {
    std::vector<PoolProfileRow> rows;
    rows.reserve(gaze_angles.size());
    for (double gaze : gaze_angles) {
        if (gaze <= 0.0 || gaze >= kPi / 2 + 1e-12) continue;
        PoolProfileRow row;
        row.gaze = gaze;
        const double theta_a = kPi / 2 - gaze;
        // Air segment from the eye down to the surface.
        const Vec3 down{std::sin(theta_a), 0.0, -std::cos(theta_a)};
        const Vec3 C = ws.eye + (ws.eye.z / std::cos(theta_a)) * down;
        const auto dw = refract(down, Vec3{0, 0, 1}, Interface{kNAir, ws.n_water});
        if (!dw) continue;
        const double t_floor = ws.floor_depth / -dw->z;
        row.floor_point = C + t_floor * *dw;
        row.floor_point.z = -ws.floor_depth;

        const auto img = apparent_point(ws, row.floor_point);
        if (!img) continue;
        row.h_point = img->h_point;
        row.v_point = img->v_point;

        // Straight back-projection: keep the true path length, swing the
        // underwater segment onto the gaze line.
        const double s1 = (row.floor_point - C).norm();
        row.back_projection = C + s1 * down;
        rows.push_back(row);
    }
    return rows;
}

std::optional<PoolSlopes> pool_local_slopes(const WaterScene& ws, double gaze) {
    const double dg = 0.5 * kPi / 180.0;
    // Window clamped inside (0, 90) degrees; one-sided near the ends.
    const double g_hi = std::min(gaze + dg, kPi / 2);
    const double g_lo = std::max(gaze - dg, 1e-4);
    if (g_hi <= g_lo) return std::nullopt;
    const auto rows = pool_floor_profile(ws, {g_hi, g_lo});
    if (rows.size() != 2) return std::nullopt;
    // gaze + dg looks nearer, gaze - dg farther; slope is rise over run
    // toward larger distances.
    const auto slope = [&](const Vec3& near_p, const Vec3& far_p) {
        return std::atan2(far_p.z - near_p.z, (far_p - near_p).hnorm());
    };
    PoolSlopes s;
    s.h = slope(rows[0].h_point, rows[1].h_point);
    s.v = slope(rows[0].v_point, rows[1].v_point);
    s.back = slope(rows[0].back_projection, rows[1].back_projection);
    return s;
}

RulerShape ruler_apparent_shape(const WaterScene& ws, double standoff, double length,
                                int samples) {
    RulerShape shape;
    for (int i = 0; i < samples; ++i) {
        const double depth = length * double(i + 1) / samples;
        const Vec3 src{ws.eye.x + standoff, ws.eye.y, -depth};
        const auto img = apparent_point(ws, src);
        if (!img) {
            ++shape.dropped;
            continue;
        }
        shape.depths.push_back(depth);
        shape.h_curve.push_back(img->h_point);
        shape.v_curve.push_back(img->v_point);
    }
    return shape;
}

std::optional<ArcherSolution> archer_aim(const WaterScene& ws, const Vec3& target) {
    if (ws.eye.z >= 0.0 || target.z <= 0.0) return std::nullopt;

    const Vec3 C = chief_crossing(ws.eye, target, ws.n_water);
    ArcherSolution sol;
    sol.apparent_dir = normalized(C - ws.eye);
    sol.true_dir = normalized(target - ws.eye);
    sol.correction = std::acos(std::clamp(dot(sol.apparent_dir, sol.true_dir), -1.0, 1.0));
    sol.water_angle = std::acos(std::clamp(sol.apparent_dir.z, -1.0, 1.0));
    return sol;
}

std::optional<Vec3> archer_emergent_direction(const WaterScene& ws, const Vec3& apparent_dir) {
    if (apparent_dir.z <= 0.0) return std::nullopt;  // gaze must rise to the surface
    return refract(normalized(apparent_dir), Vec3{0, 0, -1}, Interface{ws.n_water, kNAir});
}

}  // namespace caustica
