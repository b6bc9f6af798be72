#pragma once

#include <optional>
#include <string>

namespace caustica {

/// Parse a length with optional unit suffix (m, cm, mm, in/inch, ft/feet).
/// A bare number is meters unless `default_unit` says otherwise.
/// 1 ft = 0.3048 m exactly, 1 in = 0.0254 m exactly.
std::optional<double> parse_length(const std::string& text,
                                   const std::string& default_unit = "m");

/// Parse an angle with optional suffix (deg, rad); bare numbers are degrees.
/// Returns radians.
std::optional<double> parse_angle(const std::string& text);

/// Meters-per-unit factor for a length unit name; empty if unknown.
std::optional<double> length_unit_factor(const std::string& unit);

/// Shortest round-trip decimal form of a double (used for deterministic
/// text output: configs, CSV, diagnostics).
std::string format_double(double v);

}  // namespace caustica
