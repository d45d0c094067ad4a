#include "npz/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace npz {

namespace {

template <typename Enum>
Enum enum_from_string(const std::string& s,
                      std::initializer_list<std::pair<const char*, Enum>> table,
                      const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

StabilityClass stability_from_string(const std::string& s) {
  return enum_from_string<StabilityClass>(s,
                                          {{"attracting", StabilityClass::attracting},
                                           {"repelling", StabilityClass::repelling},
                                           {"saddle", StabilityClass::saddle},
                                           {"nonhyperbolic", StabilityClass::nonhyperbolic}},
                                          "stability class");
}

FamilyPattern pattern_from_string(const std::string& s) {
  return enum_from_string<FamilyPattern>(s,
                                         {{"free_x_zero_y", FamilyPattern::free_x_zero_y},
                                          {"free_y_zero_x", FamilyPattern::free_y_zero_x},
                                          {"free_x_fixed_z", FamilyPattern::free_x_fixed_z},
                                          {"whole_simplex", FamilyPattern::whole_simplex}},
                                         "family pattern");
}

RegimeClass regime_from_string(const std::string& s) {
  return enum_from_string<RegimeClass>(s,
                                       {{"Identity", RegimeClass::Identity},
                                        {"Linear", RegimeClass::Linear},
                                        {"CZeroDNonzero", RegimeClass::CZeroDNonzero},
                                        {"DZeroCNonzero", RegimeClass::DZeroCNonzero},
                                        {"CEqualsMinusD", RegimeClass::CEqualsMinusD},
                                        {"Generic-CLessA", RegimeClass::GenericCLessA},
                                        {"Generic-Saddle", RegimeClass::GenericSaddle},
                                        {"Generic-Interior", RegimeClass::GenericInterior},
                                        {"Boundary", RegimeClass::Boundary}},
                                       "regime class");
}

const char* kind_name(LimitPrediction::Kind k) {
  switch (k) {
    case LimitPrediction::Kind::exact: return "exact";
    case LimitPrediction::Kind::family_with_unknown: return "family_with_unknown";
    case LimitPrediction::Kind::identity: return "identity";
    case LimitPrediction::Kind::unpredicted: return "unpredicted";
  }
  return "unknown";
}

LimitPrediction::Kind prediction_kind_from_string(const std::string& s) {
  return enum_from_string<LimitPrediction::Kind>(
      s,
      {{"exact", LimitPrediction::Kind::exact},
       {"family_with_unknown", LimitPrediction::Kind::family_with_unknown},
       {"identity", LimitPrediction::Kind::identity},
       {"unpredicted", LimitPrediction::Kind::unpredicted}},
      "prediction kind");
}

}  // namespace

void to_json(json& j, const ModelParameters& p) {
  j = json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}};
}

void from_json(const json& j, ModelParameters& p) {
  j.at("a").get_to(p.a);
  j.at("b").get_to(p.b);
  j.at("c").get_to(p.c);
  j.at("d").get_to(p.d);
}

void to_json(json& j, const SimplexPoint& s) { j = json::array({s.x, s.y, s.z}); }

void from_json(const json& j, SimplexPoint& s) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("state must be a 3-element array");
  s.x = j[0].get<double>();
  s.y = j[1].get<double>();
  s.z = j[2].get<double>();
}

void to_json(json& j, const CubicCoefficients& c) {
  j = json::array();
  for (const auto& plane : c.p) {
    json rows = json::array();
    for (const auto& row : plane) rows.push_back(json(row));
    j.push_back(rows);
  }
}

void from_json(const json& j, CubicCoefficients& c) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("coefficients must be a 3x3x3 array");
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3)
      throw std::invalid_argument("coefficients must be a 3x3x3 array");
    for (int k = 0; k < 3; ++k) {
      const json& row = j[i][k];
      if (!row.is_array() || row.size() != 3)
        throw std::invalid_argument("coefficients must be a 3x3x3 array");
      for (int m = 0; m < 3; ++m) c.p[i][k][m] = row[m].get<double>();
    }
  }
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"valid", r.valid}, {"violations", r.violations}};
}

void from_json(const json& j, ValidationReport& r) {
  j.at("valid").get_to(r.valid);
  j.at("violations").get_to(r.violations);
}

void to_json(json& j, const RegimeTag& r) {
  j = json{{"class", to_string(r.cls)}, {"sub", r.sub}};
}

void from_json(const json& j, RegimeTag& r) {
  r.cls = regime_from_string(j.at("class").get<std::string>());
  j.at("sub").get_to(r.sub);
}

void to_json(json& j, const FixedPointFamily& f) {
  j = json{{"pattern", to_string(f.pattern)},
           {"lo", f.lo},
           {"hi", f.hi},
           {"fixed_z", f.fixed_z},
           {"description", f.description}};
}

void from_json(const json& j, FixedPointFamily& f) {
  f.pattern = pattern_from_string(j.at("pattern").get<std::string>());
  j.at("lo").get_to(f.lo);
  j.at("hi").get_to(f.hi);
  j.at("fixed_z").get_to(f.fixed_z);
  j.at("description").get_to(f.description);
}

void to_json(json& j, const FixedPointRecord& r) {
  j = json{{"kind", r.kind == FixedPointRecord::Kind::isolated ? "isolated" : "family"},
           {"name", r.name},
           {"point", r.point},
           {"stability", to_string(r.stability)},
           {"case", r.case_label}};
  if (r.family) j["family"] = *r.family;
  if (r.eigenvalues) {
    j["eigenvalues"] = json::array({json::array({(*r.eigenvalues)[0].real(), (*r.eigenvalues)[0].imag()}),
                                    json::array({(*r.eigenvalues)[1].real(), (*r.eigenvalues)[1].imag()})});
  }
}

void from_json(const json& j, FixedPointRecord& r) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "isolated")
    r.kind = FixedPointRecord::Kind::isolated;
  else if (kind == "family")
    r.kind = FixedPointRecord::Kind::family;
  else
    throw std::invalid_argument("unknown fixed-point kind: " + kind);
  j.at("name").get_to(r.name);
  j.at("point").get_to(r.point);
  r.stability = stability_from_string(j.at("stability").get<std::string>());
  j.at("case").get_to(r.case_label);
  if (j.contains("family"))
    r.family = j.at("family").get<FixedPointFamily>();
  else
    r.family.reset();
  if (j.contains("eigenvalues")) {
    const json& e = j.at("eigenvalues");
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("eigenvalues must be two [re, im] pairs");
    EigenPair mu;
    for (int i = 0; i < 2; ++i)
      mu[i] = {e[i].at(0).get<double>(), e[i].at(1).get<double>()};
    r.eigenvalues = mu;
  } else {
    r.eigenvalues.reset();
  }
}

void to_json(json& j, const LimitPrediction& p) {
  j = json{{"kind", kind_name(p.kind)}, {"rule", p.rule}};
  if (p.point) j["point"] = *p.point;
  if (p.family) j["family"] = *p.family;
  if (!p.unknown.empty()) j["unknown"] = p.unknown;
}

void from_json(const json& j, LimitPrediction& p) {
  p.kind = prediction_kind_from_string(j.at("kind").get<std::string>());
  j.at("rule").get_to(p.rule);
  if (j.contains("point"))
    p.point = j.at("point").get<SimplexPoint>();
  else
    p.point.reset();
  if (j.contains("family"))
    p.family = j.at("family").get<FixedPointFamily>();
  else
    p.family.reset();
  p.unknown = j.value("unknown", std::string{});
}

void to_json(json& j, const VerificationRecord& r) {
  j = json{{"initial", r.initial},
           {"prediction", r.prediction},
           {"converged", r.converged},
           {"limit", r.limit},
           {"iterations", r.iterations},
           {"pass", r.pass},
           {"known_coordinate_error", r.known_coordinate_error},
           {"fixed_residual", r.fixed_residual},
           {"basin", r.basin}};
  if (r.unknown_value) j["unknown_value"] = *r.unknown_value;
}

void from_json(const json& j, VerificationRecord& r) {
  j.at("initial").get_to(r.initial);
  j.at("prediction").get_to(r.prediction);
  j.at("converged").get_to(r.converged);
  j.at("limit").get_to(r.limit);
  j.at("iterations").get_to(r.iterations);
  j.at("pass").get_to(r.pass);
  j.at("known_coordinate_error").get_to(r.known_coordinate_error);
  j.at("fixed_residual").get_to(r.fixed_residual);
  j.at("basin").get_to(r.basin);
  if (j.contains("unknown_value"))
    r.unknown_value = j.at("unknown_value").get<double>();
  else
    r.unknown_value.reset();
}

void to_json(json& j, const SweepReport& r) {
  j = json{{"params", r.params},
           {"regime", r.regime_tag},
           {"grid_n", r.grid_n},
           {"tol", r.tol},
           {"conv_tol", r.conv_tol},
           {"max_iter", r.max_iter},
           {"points", r.points},
           {"converged", r.converged},
           {"passed", r.passed},
           {"pass_rate", r.pass_rate},
           {"max_iterations", r.max_iterations},
           {"basins", r.basins},
           {"records", r.records}};
}

void from_json(const json& j, SweepReport& r) {
  j.at("params").get_to(r.params);
  j.at("regime").get_to(r.regime_tag);
  j.at("grid_n").get_to(r.grid_n);
  j.at("tol").get_to(r.tol);
  j.at("conv_tol").get_to(r.conv_tol);
  j.at("max_iter").get_to(r.max_iter);
  j.at("points").get_to(r.points);
  j.at("converged").get_to(r.converged);
  j.at("passed").get_to(r.passed);
  j.at("pass_rate").get_to(r.pass_rate);
  j.at("max_iterations").get_to(r.max_iterations);
  j.at("basins").get_to(r.basins);
  j.at("records").get_to(r.records);
}

json fixed_point_report(const ModelParameters& p) {
  json j;
  j["params"] = p;
  j["regime"] = regime(p);
  j["fixed_points"] = enumerate_fixed_points(p);
  return j;
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "n,x,y,z\n";
  for (std::size_t n = 0; n < t.points.size(); ++n) {
    const SimplexPoint& s = t.points[n];
    out += std::to_string(n);
    out += ',';
    out += format_double(s.x);
    out += ',';
    out += format_double(s.y);
    out += ',';
    out += format_double(s.z);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double field_as_double(const std::string& text, const char* what) {
  const auto v = parse_double(text);
  if (!v) throw std::invalid_argument(std::string("malformed ") + what + ": " + text);
  return *v;
}

}  // namespace

Trajectory parse_trajectory_csv(const std::string& text, const ModelParameters& p) {
  Trajectory t;
  t.params = p;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n,x,y,z")
    throw std::invalid_argument("trajectory CSV must start with header n,x,y,z");
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4)
      throw std::invalid_argument("trajectory CSV row must have 4 fields: " + line);
    if (field_as_double(fields[0], "step index") != static_cast<double>(expected))
      throw std::invalid_argument("trajectory CSV steps must count from 0: " + line);
    // Coordinates are stored verbatim so a write/parse cycle is lossless.
    SimplexPoint s;
    s.x = field_as_double(fields[1], "x");
    s.y = field_as_double(fields[2], "y");
    s.z = field_as_double(fields[3], "z");
    t.points.push_back(s);
    ++expected;
  }
  return t;
}

namespace {

void append_portrait_row(std::string& out, std::size_t traj, const SimplexPoint& initial,
                         std::size_t n, const SimplexPoint& s, const std::string& basin) {
  out += std::to_string(traj);
  out += ',';
  out += format_double(initial.x);
  out += ',';
  out += format_double(initial.y);
  out += ',';
  out += std::to_string(n);
  out += ',';
  out += format_double(s.x);
  out += ',';
  out += format_double(s.y);
  out += ',';
  out += format_double(s.z);
  out += ',';
  out += basin;
  out += '\n';
}

template <typename Row>
void for_each_sampled(const Trajectory& t, std::size_t stride, Row&& row) {
  if (t.points.empty()) return;
  const std::size_t last = t.points.size() - 1;
  for (std::size_t n = 0; n < last; n += stride) row(n, t.points[n]);
  row(last, t.points[last]);
}

}  // namespace

std::string phase_portrait_csv(const std::vector<Trajectory>& trajectories,
                               const std::vector<std::string>& basins, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  if (basins.size() != trajectories.size())
    throw std::invalid_argument("one basin label per trajectory required");
  std::string out = "traj,x0,y0,n,x,y,z,basin\n";
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& t = trajectories[i];
    if (t.points.empty()) continue;
    for_each_sampled(t, stride, [&](std::size_t n, const SimplexPoint& s) {
      append_portrait_row(out, i, t.points.front(), n, s, basins[i]);
    });
  }
  return out;
}

json phase_portrait_json(const std::vector<Trajectory>& trajectories,
                         const std::vector<std::string>& basins, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  if (basins.size() != trajectories.size())
    throw std::invalid_argument("one basin label per trajectory required");
  json out;
  out["stride"] = stride;
  json list = json::array();
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& t = trajectories[i];
    if (t.points.empty()) continue;
    json entry;
    entry["index"] = i;
    entry["initial"] = t.points.front();
    entry["basin"] = basins[i];
    json pts = json::array();
    for_each_sampled(t, stride, [&](std::size_t n, const SimplexPoint& s) {
      pts.push_back(json::array({json(n), json(s.x), json(s.y), json(s.z)}));
    });
    entry["points"] = std::move(pts);
    list.push_back(std::move(entry));
  }
  out["trajectories"] = std::move(list);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_config_key(const std::string& key) {
  static const char* keys[] = {"a",   "b",        "c",    "d",      "x0",     "y0",
                               "n",   "tol",      "max-iter", "grid", "stride", "format",
                               "out"};
  for (const char* k : keys)
    if (key == k) return true;
  return false;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not key=value: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has an empty key or value");
    if (!known_config_key(key))
      throw std::invalid_argument("unknown config key on line " + std::to_string(lineno) +
                                  ": " + key);
    values[key] = value;  // last assignment wins
  }
  return values;
}

void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace npz
