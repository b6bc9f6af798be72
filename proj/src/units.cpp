#include "caustica/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>

namespace caustica {

namespace {

struct UnitDef {
    const char* name;
    double factor;
};

constexpr std::array<UnitDef, 8> kLengthUnits{{
    {"m", 1.0},
    {"cm", 0.01},
    {"mm", 0.001},
    {"in", 0.0254},
    {"inch", 0.0254},
    {"ft", 0.3048},
    {"feet", 0.3048},
    {"'", 0.3048},
}};

std::optional<std::pair<double, std::string>> split_number_suffix(const std::string& text) {
    std::string s = text;
    // trim
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    s = s.substr(b, e - b + 1);
    const char* begin = s.c_str();
    char* endp = nullptr;
    double v = std::strtod(begin, &endp);
    if (endp == begin) return std::nullopt;
    std::string suffix(endp);
    size_t sb = suffix.find_first_not_of(" \t");
    suffix = (sb == std::string::npos) ? std::string() : suffix.substr(sb);
    return std::make_pair(v, suffix);
}

}  // namespace

std::optional<double> length_unit_factor(const std::string& unit) {
    for (const auto& u : kLengthUnits)
        if (unit == u.name) return u.factor;
    return std::nullopt;
}

std::optional<double> parse_length(const std::string& text, const std::string& default_unit) {
    auto parts = split_number_suffix(text);
    if (!parts) return std::nullopt;
    const std::string& suffix = parts->second;
    if (suffix.empty()) {
        auto f = length_unit_factor(default_unit);
        if (!f) return std::nullopt;
        return parts->first * *f;
    }
    auto f = length_unit_factor(suffix);
    if (!f) return std::nullopt;
    return parts->first * *f;
}

std::optional<double> parse_angle(const std::string& text) {
    auto parts = split_number_suffix(text);
    if (!parts) return std::nullopt;
    const std::string& suffix = parts->second;
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    if (suffix.empty() || suffix == "deg") return parts->first * kDeg;
    if (suffix == "rad") return parts->first;
    return std::nullopt;
}

std::string format_double(double v) {
    // Shortest decimal that round-trips.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

}  // namespace caustica
