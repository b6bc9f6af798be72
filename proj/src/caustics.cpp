#include "caustica/caustics.hpp"

#include <algorithm>
#include <cmath>

#include "caustica/cylinder.hpp"

namespace caustica {

namespace {

struct DetSample {
    double det;
    double c1_norm;
    double c2_norm;
};

/// Transverse-offset Jacobian determinant at arclength t along the chief
/// ray, built from the four finite-difference neighbor rays.
class DetEvaluator {
public:
    DetEvaluator(const RayFamily2D& family, double u0, double v0, double du, double dv)
        : du_(du), dv_(dv) {
        chief_ = family.at(u0, v0);
        Vec3 a{0, 0, 1};
        if (std::abs(dot(a, chief_.dir)) > 0.9) a = Vec3{1, 0, 0};
        u_axis_ = normalized(cross(chief_.dir, a));
        v_axis_ = cross(chief_.dir, u_axis_);
        up_ = family.at(u0 + du, v0);
        um_ = family.at(u0 - du, v0);
        vp_ = family.at(u0, v0 + dv);
        vm_ = family.at(u0, v0 - dv);
    }

    DetSample operator()(double t) const {
        const Vec3 p0 = chief_.origin + t * chief_.dir;
        const auto off = [&](const Ray& r, double& a, double& b) {
            const double tau = dot(p0 - r.origin, chief_.dir) / dot(r.dir, chief_.dir);
            const Vec3 q = r.origin + tau * r.dir - p0;
            a = dot(q, u_axis_);
            b = dot(q, v_axis_);
        };
        double a1, b1, a2, b2, a3, b3, a4, b4;
        off(up_, a1, b1);
        off(um_, a2, b2);
        off(vp_, a3, b3);
        off(vm_, a4, b4);
        const double c1a = (a1 - a2) / (2 * du_), c1b = (b1 - b2) / (2 * du_);
        const double c2a = (a3 - a4) / (2 * dv_), c2b = (b3 - b4) / (2 * dv_);
        return {c1a * c2b - c1b * c2a, std::hypot(c1a, c1b), std::hypot(c2a, c2b)};
    }

    const Ray& chief() const { return chief_; }

private:
    Ray chief_, up_, um_, vp_, vm_;
    Vec3 u_axis_, v_axis_;
    double du_, dv_;
};

}  // namespace

CausticSheet envelope_2d(const RayFamily1D& family, int param_samples) {
    CausticSheet sheet;
    const double span = family.param_max - family.param_min;
    const double delta = 1e-6 * span;
    sheet.samples.reserve(param_samples);
    for (int i = 0; i < param_samples; ++i) {
        const double u = family.param_min + span * double(i) / std::max(param_samples - 1, 1);
        const Ray r1 = family.at(u - delta);
        const Ray r2 = family.at(u + delta);
        CausticSample s;
        s.param = u;
        const double cr = cross2(r1.dir, r2.dir);
        if (std::abs(cr) < 1e-14) {
            s.degenerate = true;  // neighbors parallel: envelope point at infinity
            s.point = r1.origin;
        } else {
            const double t1 = cross2(r2.origin - r1.origin, r2.dir) / cr;
            s.point = r1.origin + t1 * r1.dir;
            s.point.z = r1.origin.z;
        }
        sheet.samples.push_back(s);
    }
    // Flag cusps: the envelope tangent reverses there, or the point speed
    // collapses when the cusp falls between two samples.
    for (size_t i = 1; i + 1 < sheet.samples.size(); ++i) {
        auto& a = sheet.samples[i - 1];
        auto& b = sheet.samples[i];
        auto& c = sheet.samples[i + 1];
        if (a.degenerate || b.degenerate || c.degenerate) continue;
        const Vec3 s1 = b.point - a.point;
        const Vec3 s2 = c.point - b.point;
        if (dot2(s1, s2) < 0.0) b.cusp = true;
        const double n1 = s1.hnorm(), n2 = s2.hnorm();
        if (std::min(n1, n2) < 0.02 * std::max(n1, n2)) b.cusp = true;
    }
    return sheet;
}

std::optional<FocalPoints> focal_points_on_chief_ray(const RayFamily2D& family,
                                                     double u0, double v0,
                                                     const FocalScanOptions& opts) {
    const DetEvaluator det(family, u0, v0, opts.du, opts.dv);

    struct Root {
        double t;
        double c1, c2;
    };
    std::vector<Root> roots;

    double prev_t = opts.t_min;
    DetSample prev = det(prev_t);
    for (int i = 1; i <= opts.samples; ++i) {
        const double t = opts.t_min + (opts.t_max - opts.t_min) * double(i) / opts.samples;
        const DetSample cur = det(t);
        if ((prev.det < 0) != (cur.det < 0)) {
            double lo = prev_t, hi = t;
            double flo = prev.det;
            while (hi - lo > opts.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = det(mid).det;
                if ((flo < 0) != (fm < 0)) hi = mid;
                else { lo = mid; flo = fm; }
            }
            const double tr = 0.5 * (lo + hi);
            const DetSample at_root = det(tr);
            roots.push_back({tr, at_root.c1_norm, at_root.c2_norm});
        }
        prev_t = t;
        prev = cur;
    }
    if (roots.empty()) return std::nullopt;

    // The vertical-fan focus is where the second-parameter column collapses;
    // the horizontal-fan focus is the other degeneracy.
    auto rel2 = [](const Root& r) { return r.c2 / (r.c1 + r.c2); };
    auto rel1 = [](const Root& r) { return r.c1 / (r.c1 + r.c2); };
    const auto v_it = std::min_element(roots.begin(), roots.end(),
                                       [&](const Root& a, const Root& b) { return rel2(a) < rel2(b); });
    const auto h_it = std::min_element(roots.begin(), roots.end(),
                                       [&](const Root& a, const Root& b) { return rel1(a) < rel1(b); });
    return FocalPoints{h_it->t, v_it->t};
}

RayFamily1D point_source_circle_family(double radius, const Vec3& source) {
    RayFamily1D f;
    f.param_min = 0.0;
    f.param_max = 2.0 * 3.14159265358979323846;
    f.at = [radius, source](double phi) {
        const Vec3 q{radius * std::cos(phi), radius * std::sin(phi), source.z};
        const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
        const Vec3 d = normalized(q - source);
        return Ray{q, reflect(d, n)};
    };
    return f;
}

RayFamily1D parallel_rays_circle_family(double radius) {
    RayFamily1D f;
    f.param_min = -radius;
    f.param_max = radius;
    f.at = [radius](double b) {
        // Incoming along -x, reflecting off the concave far (left) wall.
        const Vec3 q{-std::sqrt(std::max(radius * radius - b * b, 0.0)), b, 0.0};
        const Vec3 n = q / radius;
        return Ray{q, reflect(Vec3{-1, 0, 0}, n)};
    };
    return f;
}

RayFamily2D cylinder_reflection_family(const Scene& s, const Vec3& source) {
    RayFamily2D f;
    const double radius = s.radius;
    f.at = [radius, source](double phi, double h) {
        const Vec3 q{radius * std::cos(phi), radius * std::sin(phi), h};
        const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
        const Vec3 d = normalized(q - source);
        return Ray{q, reflect(d, n)};
    };
    return f;
}

double rainbow_deviation(double n, double b) {
    const double i = std::asin(b);
    const double r = std::asin(b / n);
    return 3.14159265358979323846 + 2.0 * i - 4.0 * r;
}

RainbowMinimum rainbow_minimum(double n) {
    // Golden-section search for the unique interior minimum.
    constexpr double kPhi = 0.6180339887498949;
    double a = 1e-12, b = 1.0 - 1e-12;
    double x1 = b - kPhi * (b - a);
    double x2 = a + kPhi * (b - a);
    double f1 = rainbow_deviation(n, x1);
    double f2 = rainbow_deviation(n, x2);
    while (b - a > 1e-13) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kPhi * (b - a);
            f1 = rainbow_deviation(n, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kPhi * (b - a);
            f2 = rainbow_deviation(n, x2);
        }
    }
    const double bm = 0.5 * (a + b);
    return {bm, rainbow_deviation(n, bm)};
}

std::optional<BlurSpot> blur_spot(const Scene& s, double aperture_diameter,
                                  double focus_distance, const Vec3& source,
                                  const Vec3& P, int grid) {
    if (focus_distance <= 0.0 || aperture_diameter < 0.0) return std::nullopt;

    const Vec3 w = normalized(s.eye - P);  // chief arrival direction
    Vec3 e_v = Vec3{0, 0, 1} - dot(Vec3{0, 0, 1}, w) * w;
    if (e_v.norm() < 1e-12) return std::nullopt;  // chief ray vertical: no up reference
    e_v = normalized(e_v);
    const Vec3 e_h = cross(e_v, w);

    const double chief_az = std::atan2(P.y, P.x);
    const Vec3 focal_center = s.eye - focus_distance * w;

    BlurSpot spot;
    int total = 0, misses = 0;
    const double a_r = 0.5 * aperture_diameter;
    for (int j = 0; j < grid; ++j) {
        const double beta = grid == 1 ? 0.0 : 2.0 * double(j) / (grid - 1) - 1.0;
        for (int i = 0; i < grid; ++i) {
            const double alpha = grid == 1 ? 0.0 : 2.0 * double(i) / (grid - 1) - 1.0;
            if (alpha * alpha + beta * beta > 1.0) continue;
            ++total;
            const Vec3 A = s.eye + a_r * (alpha * e_h + beta * e_v);
            // Reflection point sending source to this aperture point: the
            // horizontal problem picks the azimuth, verticals are linear.
            const auto roots = reflection_azimuths(s.radius, source, A);
            if (roots.empty()) {
                ++misses;
                continue;
            }
            double phi = roots[0];
            for (double r : roots)
                if (std::abs(r - chief_az) < std::abs(phi - chief_az)) phi = r;
            const Vec3 q2{s.radius * std::cos(phi), s.radius * std::sin(phi), 0.0};
            const double s1 = Vec3{q2.x - source.x, q2.y - source.y, 0.0}.hnorm();
            const double s2 = Vec3{A.x - q2.x, A.y - q2.y, 0.0}.hnorm();
            const double zx = (source.z * s2 + A.z * s1) / (s1 + s2);
            if (zx < 0.0 || zx > s.height) {
                ++misses;
                continue;
            }
            const Vec3 X{q2.x, q2.y, zx};
            const Vec3 d_a = normalized(A - X);
            // Ideal-lens refocus: where the arriving ray crosses the plane
            // conjugate to the focus distance.
            const double denom = dot(d_a, w);
            if (std::abs(denom) < 1e-12) {
                ++misses;
                continue;
            }
            const double tau = dot(focal_center - A, w) / denom;
            const Vec3 q = A + tau * d_a - focal_center;
            spot.points.push_back(Vec3{dot(q, e_h), dot(q, e_v), 0.0});
        }
    }
    if (total == 0 || spot.points.empty()) return std::nullopt;
    spot.occluded_fraction = double(misses) / double(total);

    // Principal axes of the cloud.
    double mh = 0, mv = 0;
    for (const auto& p : spot.points) { mh += p.x; mv += p.y; }
    mh /= spot.points.size();
    mv /= spot.points.size();
    double shh = 0, svv = 0, shv = 0;
    for (const auto& p : spot.points) {
        const double dh = p.x - mh, dv = p.y - mv;
        shh += dh * dh;
        svv += dv * dv;
        shv += dh * dv;
    }
    shh /= spot.points.size();
    svv /= spot.points.size();
    shv /= spot.points.size();
    const double tr = shh + svv;
    const double dd = std::sqrt(std::max((shh - svv) * (shh - svv) + 4 * shv * shv, 0.0));
    const double l1 = 0.5 * (tr + dd), l2 = std::max(0.5 * (tr - dd), 0.0);
    spot.sigma_major = std::sqrt(l1);
    spot.sigma_minor = std::sqrt(l2);
    // Major-axis eigenvector: vertical when it leans toward e_v.
    const Vec3 ev1 = (std::abs(shv) > 1e-30)
                         ? normalized(Vec3{l1 - svv, shv, 0.0})
                         : (shh >= svv ? Vec3{1, 0, 0} : Vec3{0, 1, 0});
    spot.orientation = std::abs(ev1.y) >= std::abs(ev1.x) ? SpotOrientation::Vertical
                                                          : SpotOrientation::Horizontal;
    return spot;
}

}  // namespace caustica
