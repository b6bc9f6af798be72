#include "caustica/cylinder.hpp"

#include <algorithm>
#include <cmath>

namespace caustica {

namespace {

constexpr double kAzimuthTol = 1e-12;   // bisection tolerance, radians
constexpr double kGrazingCos = 1e-9;    // chief rays closer than this to the silhouette are degenerate

}  // namespace

std::vector<double> reflection_azimuths(double radius, const Vec3& a, const Vec3& b) {
    // Alhazen alignment: zero when the 2D reflection at Q(phi) of the ray
    // from a points at b.
    const auto alignment = [&](double phi) {
        const Vec3 q{radius * std::cos(phi), radius * std::sin(phi), 0.0};
        const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
        const Vec3 in{q.x - a.x, q.y - a.y, 0.0};
        const Vec3 r = in - 2.0 * dot2(in, n) * n;
        const Vec3 out{b.x - q.x, b.y - q.y, 0.0};
        return cross2(r, out);
    };

    const double ah = Vec3{a.x, a.y, 0}.hnorm();
    if (ah <= radius) return {};
    const double a_az = std::atan2(a.y, a.x);
    const double lim = std::acos(radius / ah);
    constexpr int kScan = 2048;

    std::vector<double> roots;
    double prev_phi = a_az - lim * (1.0 - 1e-9);
    double prev_g = alignment(prev_phi);
    for (int i = 1; i <= kScan; ++i) {
        const double phi = a_az + lim * (2.0 * double(i) / kScan - 1.0) * (1.0 - 1e-9);
        const double g = alignment(phi);
        if (prev_g == 0.0 || (prev_g < 0) != (g < 0)) {
            // Bracketed bisection refined by secant steps.
            double lo = prev_phi, hi = phi, flo = prev_g, fhi = g;
            while (hi - lo > kAzimuthTol) {
                double mid = 0.5 * (lo + hi);
                if (fhi != flo) {
                    const double sec = hi - fhi * (hi - lo) / (fhi - flo);
                    if (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) mid = sec;
                }
                const double fm = alignment(mid);
                if ((flo < 0) != (fm < 0)) {
                    hi = mid;
                    fhi = fm;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double phi_root = 0.5 * (lo + hi);
            const Vec3 n{std::cos(phi_root), std::sin(phi_root), 0.0};
            const Vec3 q{radius * n.x, radius * n.y, 0.0};
            const Vec3 to_a{a.x - q.x, a.y - q.y, 0.0};
            const Vec3 to_b{b.x - q.x, b.y - q.y, 0.0};
            // Reflection must happen on the face seen by both endpoints.
            if (dot2(n, to_a) > 0.0 && dot2(n, to_b) > 0.0) roots.push_back(phi_root);
        }
        prev_phi = phi;
        prev_g = g;
    }
    return roots;
}

bool table_point_occluded(const Scene& s, const Vec3& T) {
    const Vec3 d = T - s.eye;
    const double len = d.norm();
    auto hit = intersect_cylinder(Ray{s.eye, d / len}, s.radius);
    if (!hit || hit->t >= len) return false;
    return hit->point.z >= 0.0 && hit->point.z <= s.height;
}

double visible_azimuth_limit(const Scene& s) {
    return std::acos(s.radius / s.eye.hnorm());
}

bool visible_from_eye(const Scene& s, const Vec3& P) {
    const Vec3 n{P.x / s.radius, P.y / s.radius, 0.0};
    return dot(n, s.eye - P) > 0.0;
}

std::optional<Vec3> trace_to_table(const Scene& s, const Vec3& P) {
    const Vec3 n{P.x / s.radius, P.y / s.radius, 0.0};
    const Vec3 in = normalized(P - s.eye);
    if (-dot(in, n) <= kGrazingCos) return std::nullopt;  // silhouette or back face
    const Vec3 r = reflect(in, n);
    if (P.z == 0.0) return P;  // already on the table
    if (r.z >= 0.0) return std::nullopt;  // reflected ray never descends
    return intersect_plane_z0(Ray{P, r});
}

namespace {

/// Height of the reflection point from the solved azimuth (the vertical
/// slope is preserved by the horizontal-normal reflection).
std::optional<Vec3> lift_reflection_point(const Scene& s, const Vec3& T, double phi) {
    const Vec3 q{s.radius * std::cos(phi), s.radius * std::sin(phi), 0.0};
    const double s1 = Vec3{q.x - s.eye.x, q.y - s.eye.y, 0.0}.hnorm();
    const double s2 = Vec3{T.x - q.x, T.y - q.y, 0.0}.hnorm();
    const double zp = s.eye.z * s2 / (s1 + s2);
    if (zp > s.height) return std::nullopt;
    return Vec3{q.x, q.y, zp};
}

}  // namespace

std::optional<Vec3> solve_reflection_point(const Scene& s, const Vec3& T) {
    if (T.z != 0.0) return std::nullopt;
    if (T.hnorm() <= s.radius) return std::nullopt;  // inside the footprint
    if (table_point_occluded(s, T)) return std::nullopt;

    const auto roots = reflection_azimuths(s.radius, s.eye, T);
    if (roots.empty()) return std::nullopt;
    // Tie-break surviving roots by total horizontal path length.
    double phi = roots[0];
    if (roots.size() > 1) {
        double best_path = 0;
        bool first = true;
        for (double r : roots) {
            const Vec3 q{s.radius * std::cos(r), s.radius * std::sin(r), 0.0};
            const double path = Vec3{q.x - s.eye.x, q.y - s.eye.y, 0.0}.hnorm() +
                                Vec3{T.x - q.x, T.y - q.y, 0.0}.hnorm();
            if (first || path < best_path) {
                best_path = path;
                phi = r;
                first = false;
            }
        }
    }
    return lift_reflection_point(s, T, phi);
}

std::optional<Vec3> solve_reflection_point_hinted(const Scene& s, const Vec3& T,
                                                  double& azimuth_hint) {
    if (T.z != 0.0) return std::nullopt;
    if (T.hnorm() <= s.radius) return std::nullopt;
    if (table_point_occluded(s, T)) return std::nullopt;

    if (std::isfinite(azimuth_hint)) {
        const auto alignment = [&](double phi) {
            const Vec3 q{s.radius * std::cos(phi), s.radius * std::sin(phi), 0.0};
            const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
            const Vec3 in{q.x - s.eye.x, q.y - s.eye.y, 0.0};
            const Vec3 r = in - 2.0 * dot2(in, n) * n;
            return cross2(r, Vec3{T.x - q.x, T.y - q.y, 0.0});
        };
        const double eye_az = std::atan2(s.eye.y, s.eye.x);
        const double vis = visible_azimuth_limit(s) * (1.0 - 1e-9);
        double w = vis / 256.0;
        for (int grow = 0; grow < 3; ++grow, w *= 8.0) {
            double lo = std::max(azimuth_hint - w, eye_az - vis);
            double hi = std::min(azimuth_hint + w, eye_az + vis);
            if (hi <= lo) break;
            double flo = alignment(lo), fhi = alignment(hi);
            if ((flo < 0) == (fhi < 0)) continue;
            while (hi - lo > kAzimuthTol) {
                double mid = 0.5 * (lo + hi);
                if (fhi != flo) {
                    const double sec = hi - fhi * (hi - lo) / (fhi - flo);
                    if (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) mid = sec;
                }
                const double fm = alignment(mid);
                if ((flo < 0) != (fm < 0)) {
                    hi = mid;
                    fhi = fm;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double phi = 0.5 * (lo + hi);
            const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
            const Vec3 q{s.radius * n.x, s.radius * n.y, 0.0};
            if (dot2(n, Vec3{s.eye.x - q.x, s.eye.y - q.y, 0.0}) <= 0.0 ||
                dot2(n, Vec3{T.x - q.x, T.y - q.y, 0.0}) <= 0.0)
                break;  // drifted onto an invisible face: rescan
            azimuth_hint = phi;
            return lift_reflection_point(s, T, phi);
        }
    }

    const auto full = solve_reflection_point(s, T);
    if (full) azimuth_hint = std::atan2(full->y, full->x);
    return full;
}

std::optional<ImagePair> image_pair(const Scene& s, const Vec3& P, const Vec3& source) {
    const Vec3 n{P.x / s.radius, P.y / s.radius, 0.0};
    const Vec3 to_eye = s.eye - P;
    if (dot(n, to_eye) / to_eye.norm() <= kGrazingCos) return std::nullopt;

    // Sagittal: the tube is flat vertically, so the vertical fan sees a
    // plane mirror through P; the image is the tangent-plane reflection.
    const Vec3 v = source - 2.0 * dot(source - P, n) * n;

    // Tangential: convex-mirror relation in the horizontal osculating
    // circle, lifted along the oblique chief ray. Exact for the cylinder:
    //   s_h = R c d3 / (2 d2 + R c),  c = horizontal incidence cosine,
    // measured backward along the chief ray from P.
    const Vec3 d = source - P;
    const double d3 = d.norm();
    const double d2 = d.hnorm();
    if (d2 <= 0.0 || d3 <= 0.0) return std::nullopt;
    const double c = dot2(d, n) / d2;
    if (c <= kGrazingCos) return std::nullopt;  // grazing horizontal incidence
    const double s_h = (c * s.radius * d3) / (2.0 * d2 + c * s.radius);
    const Vec3 back = normalized(P - s.eye);  // beyond the mirror, away from the eye
    const Vec3 h = P + s_h * back;

    return ImagePair{h, v};
}

VirtualSurface virtual_surface(const Scene& s, int azimuth_samples, int height_samples,
                               double azimuth_span_fraction, double height_min) {
    VirtualSurface out;
    const double eye_az = std::atan2(s.eye.y, s.eye.x);
    const double lim = visible_azimuth_limit(s) * azimuth_span_fraction;
    out.samples.reserve(size_t(azimuth_samples) * size_t(height_samples));
    for (int j = 0; j < height_samples; ++j) {
        const double h = height_min +
                         (s.height - height_min) * double(j) / std::max(height_samples - 1, 1);
        for (int i = 0; i < azimuth_samples; ++i) {
            const double az = eye_az + lim * (2.0 * double(i) / std::max(azimuth_samples - 1, 1) - 1.0);
            const SurfacePoint sp{az, h};
            const Vec3 P = cylinder_point(s, sp);
            auto T = trace_to_table(s, P);
            if (!T) {
                ++out.skipped;
                continue;
            }
            auto pair = image_pair(s, P, *T);
            if (!pair) {
                ++out.skipped;
                continue;
            }
            out.samples.push_back({sp, pair->h_point, *T});
        }
    }
    return out;
}

}  // namespace caustica
