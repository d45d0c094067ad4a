#ifndef NPZ_IO_HPP
#define NPZ_IO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "npz/analysis.hpp"
#include "npz/dynamics.hpp"
#include "npz/model.hpp"

// Serialization: JSON schemas for every report type (lossless double
// round-trip via shortest-representation printing), CSV trajectory and
// phase-portrait writers (17 significant digits, LF endings, no quoting),
// and the flat key=value run-configuration format.

namespace npz {

using nlohmann::json;

// ---- JSON (ADL hooks used by nlohmann::json) ----
void to_json(json& j, const ModelParameters& p);
void from_json(const json& j, ModelParameters& p);
void to_json(json& j, const SimplexPoint& s);      // [x, y, z]
void from_json(const json& j, SimplexPoint& s);
void to_json(json& j, const CubicCoefficients& c); // nested 3x3x3 array
void from_json(const json& j, CubicCoefficients& c);
void to_json(json& j, const ValidationReport& r);
void from_json(const json& j, ValidationReport& r);
void to_json(json& j, const RegimeTag& r);
void from_json(const json& j, RegimeTag& r);
void to_json(json& j, const FixedPointFamily& f);
void from_json(const json& j, FixedPointFamily& f);
void to_json(json& j, const FixedPointRecord& r);
void from_json(const json& j, FixedPointRecord& r);
void to_json(json& j, const LimitPrediction& p);
void from_json(const json& j, LimitPrediction& p);
void to_json(json& j, const VerificationRecord& r);
void from_json(const json& j, VerificationRecord& r);
void to_json(json& j, const SweepReport& r);
void from_json(const json& j, SweepReport& r);

// Full fixed-point report as emitted by the CLI.
json fixed_point_report(const ModelParameters& p);

// ---- numbers ----
// Locale-independent decimal parsing (std::from_chars); full-string match
// required.  Returns nullopt on malformed input.
std::optional<double> parse_double(const std::string& text);
// Shortest form with 17 significant digits: round-trips any double.
std::string format_double(double v);

// ---- CSV ----
// Header "n,x,y,z", one row per stored state.
std::string trajectory_csv(const Trajectory& t);
Trajectory parse_trajectory_csv(const std::string& text, const ModelParameters& p);

// Phase-portrait dataset: header "traj,x0,y0,n,x,y,z,basin"; each trajectory
// is subsampled with the given stride (last point always included).
std::string phase_portrait_csv(const std::vector<Trajectory>& trajectories,
                               const std::vector<std::string>& basins,
                               std::size_t stride);
json phase_portrait_json(const std::vector<Trajectory>& trajectories,
                         const std::vector<std::string>& basins,
                         std::size_t stride);

// ---- run configuration ----
// Flat key=value file; '#' starts a comment; keys match the CLI flag names
// (a, b, c, d, x0, y0, n, tol, max-iter, grid, stride, format, out).
// Unknown keys or malformed lines are errors (std::invalid_argument).
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Writes text to path, or to the stream when path is empty.  Throws
// std::runtime_error when the file cannot be written.
void write_output(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace npz

#endif  // NPZ_IO_HPP
