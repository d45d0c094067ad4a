// npzdyn: command-line front end for the plankton-nitrogen simplex dynamics
// library.  Subcommands: validate | fixed-points | iterate | phase-portrait |
// verify.  Exit codes: 0 success (valid parameters / all checks pass),
// 1 domain failure (invalid parameters for validate, failed verification for
// verify), 2 malformed input.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "npz/dynamics.hpp"
#include "npz/io.hpp"

namespace {

struct CmdOptions {
  std::optional<double> a, b, c, d, x0, y0, tol;
  std::optional<std::uint64_t> n, max_iter, grid, stride;
  std::string format;
  std::string out;
  std::string config_path;

  CLI::Option* oa{nullptr};
  CLI::Option* ob{nullptr};
  CLI::Option* oc{nullptr};
  CLI::Option* od{nullptr};
  CLI::Option* ox0{nullptr};
  CLI::Option* oy0{nullptr};
  CLI::Option* otol{nullptr};
  CLI::Option* on{nullptr};
  CLI::Option* omax{nullptr};
  CLI::Option* ogrid{nullptr};
  CLI::Option* ostride{nullptr};
  CLI::Option* oformat{nullptr};
  CLI::Option* oout{nullptr};
};

void add_param_options(CLI::App* cmd, CmdOptions& o) {
  o.oa = cmd->add_option("-a", o.a, "phytoplankton mortality-to-nitrogen rate (0..1)");
  o.ob = cmd->add_option("-b", o.b, "zooplankton mortality-to-nitrogen rate (0..1)");
  o.oc = cmd->add_option("-c", o.c, "nitrogen uptake rate of phytoplankton (-(1-a)..1+a)");
  o.od = cmd->add_option("-d", o.d, "grazing rate of zooplankton on phytoplankton (-(1-b)..1-a)");
  cmd->add_option("--config", o.config_path,
                  "flat key=value configuration file; command-line flags take precedence");
  o.oout = cmd->add_option("--out", o.out, "write output to this file instead of stdout");
}

void add_format_option(CLI::App* cmd, CmdOptions& o) {
  o.oformat = cmd->add_option("--format", o.format, "output format")
                  ->check(CLI::IsMember({"json", "csv"}));
}

void add_initial_point_options(CLI::App* cmd, CmdOptions& o) {
  o.ox0 = cmd->add_option("--x0", o.x0, "initial zooplankton fraction");
  o.oy0 = cmd->add_option("--y0", o.y0, "initial phytoplankton fraction (z0 = 1 - x0 - y0)");
}

std::uint64_t parse_count(const std::string& text, const std::string& key) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("config value for " + key + " is not a count: " + text);
  return value;
}

void merge_config(CmdOptions& o) {
  if (o.config_path.empty()) return;
  const auto kv = npz::parse_config_file(o.config_path);
  const auto fill_real = [&](CLI::Option* opt, std::optional<double>& slot, const char* key) {
    if (opt == nullptr || opt->count() > 0) return;
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    const auto v = npz::parse_double(it->second);
    if (!v)
      throw std::invalid_argument(std::string("config value for ") + key +
                                  " is not a number: " + it->second);
    slot = *v;
  };
  const auto fill_count = [&](CLI::Option* opt, std::optional<std::uint64_t>& slot,
                              const char* key) {
    if (opt == nullptr || opt->count() > 0) return;
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    slot = parse_count(it->second, key);
  };
  fill_real(o.oa, o.a, "a");
  fill_real(o.ob, o.b, "b");
  fill_real(o.oc, o.c, "c");
  fill_real(o.od, o.d, "d");
  fill_real(o.ox0, o.x0, "x0");
  fill_real(o.oy0, o.y0, "y0");
  fill_real(o.otol, o.tol, "tol");
  fill_count(o.on, o.n, "n");
  fill_count(o.omax, o.max_iter, "max-iter");
  fill_count(o.ogrid, o.grid, "grid");
  fill_count(o.ostride, o.stride, "stride");
  if (o.oformat != nullptr && o.oformat->count() == 0) {
    const auto it = kv.find("format");
    if (it != kv.end()) {
      if (it->second != "json" && it->second != "csv")
        throw std::invalid_argument("config value for format must be json or csv: " + it->second);
      o.format = it->second;
    }
  }
  if (o.oout != nullptr && o.oout->count() == 0) {
    const auto it = kv.find("out");
    if (it != kv.end()) o.out = it->second;
  }
}

npz::ModelParameters require_params(const CmdOptions& o) {
  std::string missing;
  const auto note = [&](const std::optional<double>& v, const char* name) {
    if (!v) {
      if (!missing.empty()) missing += ", ";
      missing += name;
    }
  };
  note(o.a, "a");
  note(o.b, "b");
  note(o.c, "c");
  note(o.d, "d");
  if (!missing.empty())
    throw std::invalid_argument("missing required parameter(s): " + missing +
                                " (set via flags or --config)");
  return npz::ModelParameters{*o.a, *o.b, *o.c, *o.d};
}

void require_json_only(const CmdOptions& o, const char* cmd) {
  if (o.oformat != nullptr && o.oformat->count() > 0 && o.format == "csv")
    throw std::invalid_argument(std::string(cmd) + " emits a JSON report; --format csv is not supported");
}

std::size_t default_stride(std::size_t n) { return n <= 200 ? 1 : (n + 199) / 200; }

int run_validate(CmdOptions& o) {
  merge_config(o);
  require_json_only(o, "validate");
  const npz::ModelParameters p = require_params(o);
  const npz::ValidationReport rep = npz::validate_parameters(p);
  npz::json j;
  j["params"] = p;
  j["report"] = rep;
  if (rep.valid) j["regime"] = npz::regime(p);
  npz::write_output(o.out, j.dump(2) + "\n", std::cout);
  return rep.valid ? 0 : 1;
}

int run_fixed_points(CmdOptions& o) {
  merge_config(o);
  require_json_only(o, "fixed-points");
  const npz::ModelParameters p = require_params(o);
  npz::require_simplex_preserving(p);
  npz::write_output(o.out, npz::fixed_point_report(p).dump(2) + "\n", std::cout);
  return 0;
}

int run_iterate(CmdOptions& o) {
  merge_config(o);
  const npz::ModelParameters p = require_params(o);
  npz::require_simplex_preserving(p);
  if (!o.x0 || !o.y0)
    throw std::invalid_argument("iterate requires --x0 and --y0 (z0 = 1 - x0 - y0 is implied)");
  const npz::SimplexPoint s0 = npz::make_point(*o.x0, *o.y0, 1.0 - *o.x0 - *o.y0);
  const std::size_t n = o.n.value_or(100);
  const npz::Trajectory t = npz::iterate(p, s0, n);
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  if (fmt == "csv") {
    npz::write_output(o.out, npz::trajectory_csv(t), std::cout);
  } else {
    npz::json j;
    j["params"] = p;
    j["points"] = t.points;
    npz::write_output(o.out, j.dump(2) + "\n", std::cout);
  }
  return 0;
}

int run_phase_portrait(CmdOptions& o) {
  merge_config(o);
  const npz::ModelParameters p = require_params(o);
  npz::require_simplex_preserving(p);
  const std::size_t n = o.n.value_or(100);
  const std::size_t grid = o.grid.value_or(30);
  if (grid < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const std::size_t stride = o.stride.value_or(default_stride(n));
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  const double tol = o.tol.value_or(npz::default_tol);
  const std::size_t max_iter = o.max_iter.value_or(npz::default_max_iter);
  std::vector<npz::Trajectory> trajectories;
  std::vector<std::string> basins;
  const double g = static_cast<double>(grid);
  for (std::size_t i = 0; i <= grid; ++i) {
    for (std::size_t j = 0; i + j <= grid; ++j) {
      const npz::SimplexPoint s0 =
          npz::make_point(static_cast<double>(i) / g, static_cast<double>(j) / g,
                          static_cast<double>(grid - i - j) / g);
      trajectories.push_back(npz::iterate(p, s0, n));
      const npz::ConvergeResult cv = npz::converge(p, s0, tol, max_iter);
      basins.push_back(cv.converged ? npz::basin_label(p, cv.limit) : "not_converged");
    }
  }
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  if (fmt == "csv")
    npz::write_output(o.out, npz::phase_portrait_csv(trajectories, basins, stride), std::cout);
  else
    npz::write_output(o.out, npz::phase_portrait_json(trajectories, basins, stride).dump(2) + "\n",
                      std::cout);
  return 0;
}

int run_verify(CmdOptions& o) {
  merge_config(o);
  require_json_only(o, "verify");
  const npz::ModelParameters p = require_params(o);
  npz::require_simplex_preserving(p);
  const std::size_t grid = o.grid.value_or(30);
  const double conv_tol = o.tol.value_or(npz::default_tol);
  const std::size_t max_iter = o.max_iter.value_or(npz::default_max_iter);
  const npz::SweepReport rep =
      npz::regularity_sweep(p, grid, npz::prediction_tol, conv_tol, max_iter);
  const npz::json j = rep;
  npz::write_output(o.out, j.dump(2) + "\n", std::cout);
  return rep.passed == rep.points ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time plankton-nitrogen dynamics on the 2-simplex"};
  app.require_subcommand(1);

  CmdOptions validate_opts, fixed_opts, iterate_opts, portrait_opts, verify_opts;

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Check parameter admissibility and report the regime");
  add_param_options(cmd_validate, validate_opts);
  add_format_option(cmd_validate, validate_opts);

  CLI::App* cmd_fixed =
      app.add_subcommand("fixed-points", "Enumerate and classify all fixed points");
  add_param_options(cmd_fixed, fixed_opts);
  add_format_option(cmd_fixed, fixed_opts);

  CLI::App* cmd_iterate = app.add_subcommand("iterate", "Emit the trajectory table n,x,y,z");
  add_param_options(cmd_iterate, iterate_opts);
  add_format_option(cmd_iterate, iterate_opts);
  add_initial_point_options(cmd_iterate, iterate_opts);
  iterate_opts.on = cmd_iterate->add_option("--n", iterate_opts.n, "number of steps (default 100)");

  CLI::App* cmd_portrait = app.add_subcommand(
      "phase-portrait", "Emit subsampled trajectories plus basin labels for a simplex grid");
  add_param_options(cmd_portrait, portrait_opts);
  add_format_option(cmd_portrait, portrait_opts);
  portrait_opts.on =
      cmd_portrait->add_option("--n", portrait_opts.n, "steps per trajectory (default 100)");
  portrait_opts.ogrid =
      cmd_portrait->add_option("--grid", portrait_opts.grid, "barycentric grid resolution (default 30)");
  portrait_opts.ostride = cmd_portrait->add_option(
      "--stride", portrait_opts.stride, "emit every s-th step (default 1 when n <= 200, else n/200)");
  portrait_opts.otol = cmd_portrait->add_option(
      "--tol", portrait_opts.tol, "convergence tolerance for basin labelling (default 1e-9)");
  portrait_opts.omax = cmd_portrait->add_option(
      "--max-iter", portrait_opts.max_iter, "iteration cap for basin labelling (default 1e6)");

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "Sweep a simplex grid and check every trajectory against its predicted limit");
  add_param_options(cmd_verify, verify_opts);
  add_format_option(cmd_verify, verify_opts);
  verify_opts.ogrid =
      cmd_verify->add_option("--grid", verify_opts.grid, "barycentric grid resolution (default 30)");
  verify_opts.otol =
      cmd_verify->add_option("--tol", verify_opts.tol, "convergence tolerance (default 1e-9)");
  verify_opts.omax =
      cmd_verify->add_option("--max-iter", verify_opts.max_iter, "iteration cap (default 1e6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_validate->parsed()) return run_validate(validate_opts);
    if (cmd_fixed->parsed()) return run_fixed_points(fixed_opts);
    if (cmd_iterate->parsed()) return run_iterate(iterate_opts);
    if (cmd_portrait->parsed()) return run_phase_portrait(portrait_opts);
    if (cmd_verify->parsed()) return run_verify(verify_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand guarantees one branch
}
