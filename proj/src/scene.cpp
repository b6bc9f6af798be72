#include "caustica/scene.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "caustica/units.hpp"

namespace caustica {

Scene default_scene(bool eye_distance_from_axis) {
    Scene s;
    s.radius = 0.025;
    s.height = 0.15;
    const double d = 0.25;
    const double x = eye_distance_from_axis ? d : d + s.radius;
    s.eye = Vec3{x, 0.0, 0.40};
    return s;
}

Scene parse_scene_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SceneConfigError("scene config line " + std::to_string(lineno) +
                                   ": expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            size_t b2 = s.find_first_not_of(" \t");
            size_t e2 = s.find_last_not_of(" \t");
            s = (b2 == std::string::npos) ? std::string() : s.substr(b2, e2 - b2 + 1);
        };
        strip(key);
        strip(val);
        kv[key] = val;
    }

    std::string unit = "m";
    if (auto it = kv.find("units"); it != kv.end()) {
        if (!length_unit_factor(it->second))
            throw SceneConfigError("scene config: unknown units '" + it->second + "'");
        unit = it->second;
        kv.erase(it);
    }

    auto take = [&](const char* key) -> std::optional<double> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto v = parse_length(it->second, unit);
        if (!v)
            throw SceneConfigError(std::string("scene config: bad value for ") + key +
                                   ": '" + it->second + "'");
        kv.erase(it);
        return v;
    };

    bool from_axis = false;
    if (auto it = kv.find("eye_distance_from"); it != kv.end()) {
        if (it->second == "axis") from_axis = true;
        else if (it->second != "surface")
            throw SceneConfigError("scene config: eye_distance_from must be surface or axis");
        kv.erase(it);
    }

    Scene s = default_scene(false);
    if (auto v = take("radius")) s.radius = *v;
    if (auto v = take("height")) s.height = *v;

    auto ex = take("eye_x");
    auto ey = take("eye_y");
    auto ez = take("eye_z");
    auto edist = take("eye_distance");
    auto eheight = take("eye_height");
    if (edist || eheight) {
        if (ex || ey || ez)
            throw SceneConfigError("scene config: eye_distance/eye_height conflicts with eye_x/eye_y/eye_z");
        double d = edist.value_or(0.25);
        s.eye = Vec3{from_axis ? d : d + s.radius, 0.0, eheight.value_or(0.40)};
    } else {
        // Default eye tracks the configured radius when measured from the surface.
        s.eye = Vec3{0.25 + s.radius, 0.0, 0.40};
        if (ex) s.eye.x = *ex;
        if (ey) s.eye.y = *ey;
        if (ez) s.eye.z = *ez;
    }

    if (!kv.empty())
        throw SceneConfigError("scene config: unknown key '" + kv.begin()->first + "'");
    if (!s.valid())
        throw SceneConfigError("scene config: eye must be outside the tube and above the table");
    return s;
}

Scene load_scene_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SceneConfigError("cannot open scene config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scene_config(ss.str());
}

std::string scene_to_config(const Scene& s) {
    std::ostringstream out;
    out << "units=m\n";
    out << "eye_x=" << format_double(s.eye.x) << "\n";
    out << "eye_y=" << format_double(s.eye.y) << "\n";
    out << "eye_z=" << format_double(s.eye.z) << "\n";
    out << "radius=" << format_double(s.radius) << "\n";
    out << "height=" << format_double(s.height) << "\n";
    return out.str();
}

}  // namespace caustica
