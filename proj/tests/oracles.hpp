#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: brute-force pairwise ray intersection for envelopes, scalar Snell
// arithmetic, and small helpers for subprocess CLI runs.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caustica/caustics.hpp"
#include "caustica/vec3.hpp"

namespace oracles {

using caustica::Ray;
using caustica::Vec3;

/// Envelope by literal pairwise intersection of consecutive rays of the
/// family, no finite-difference shortcut: the caustic is where ray k meets
/// ray k+1.
inline std::vector<Vec3> pairwise_envelope(const caustica::RayFamily1D& fam, int n_rays) {
    std::vector<Vec3> pts;
    pts.reserve(n_rays - 1);
    Ray prev = fam.at(fam.param_min);
    for (int k = 1; k < n_rays; ++k) {
        const double u = fam.param_min +
                         (fam.param_max - fam.param_min) * double(k) / (n_rays - 1);
        const Ray cur = fam.at(u);
        const double cr = caustica::cross2(prev.dir, cur.dir);
        if (std::abs(cr) > 1e-14) {
            const double t = caustica::cross2(cur.origin - prev.origin, cur.dir) / cr;
            Vec3 p = prev.origin + t * prev.dir;
            p.z = prev.origin.z;
            pts.push_back(p);
        }
        prev = cur;
    }
    return pts;
}

/// Scalar Snell refraction angle; empty on total internal reflection.
inline std::optional<double> snell_angle(double theta_in, double n_in, double n_out) {
    const double s = n_in * std::sin(theta_in) / n_out;
    if (s > 1.0) return std::nullopt;
    return std::asin(s);
}

inline std::mt19937 rng(unsigned seed) { return std::mt19937(seed); }

inline Vec3 random_unit(std::mt19937& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v{n(g), n(g), n(g)};
    while (v.norm() < 1e-6) v = Vec3{n(g), n(g), n(g)};
    return caustica::normalized(v);
}

// --- subprocess helpers for CLI tests --------------------------------------

struct CliRun {
    int status{-1};
    std::string out;
    std::string err;
};

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline CliRun run_cli(const std::string& args, const std::string& tag) {
    const std::string out_path = "cli_" + tag + ".out";
    const std::string err_path = "cli_" + tag + ".err";
    const std::string cmd =
        std::string(CAUSTICA_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    CliRun r;
    r.status = (rc >= 256) ? rc / 256 : rc;  // decode wait status
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

/// First "key=value" match in a block of CLI output.
inline std::optional<std::string> kv(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return std::nullopt;
}

inline std::optional<double> kv_num(const std::string& text, const std::string& key) {
    auto v = kv(text, key);
    if (!v) return std::nullopt;
    return std::strtod(v->c_str(), nullptr);
}

}  // namespace oracles
