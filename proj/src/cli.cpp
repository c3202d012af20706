#include "xxzdm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "xxzdm/berry.hpp"
#include "xxzdm/eigenstates.hpp"
#include "xxzdm/io.hpp"
#include "xxzdm/model.hpp"
#include "xxzdm/spectrum.hpp"
#include "xxzdm/sweep.hpp"
#include "xxzdm/version.hpp"

namespace xxzdm {

namespace {

struct CliOptions {
  Real j = 1, jz = 1, d = 0, b = 0, theta = 0, theta_pi = 0, phi = 0;
  bool theta_pi_given = false;
  int level = 0;
  bool level_given = false;
  std::string method = "closed";
  bool method_given = false;
  int grid = 1024;
  Real period = 2000;
  long steps = 400000;
  int figure = 0;
  std::vector<std::string> axes;
  std::vector<std::string> ranges;
  std::string format = "csv";
  std::string out_path;
  int threads = 0;
};

[[noreturn]] void usage_error(const std::string& msg)
{
  throw CLI::ValidationError(msg);
}

Axis parse_axis(const std::string& name)
{
  if (name == "b")
    return Axis::b;
  if (name == "d")
    return Axis::d;
  if (name == "theta")
    return Axis::theta;
  usage_error("unknown axis '" + name + "' (expected b, d or theta)");
}

GridSpec parse_range(Axis axis, const std::string& text)
{
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    usage_error("--range expects start:stop:count, got '" + text + "'");
  try {
    std::size_t used = 0;
    const Real start = std::stod(text.substr(0, first), &used);
    const Real stop = std::stod(text.substr(first + 1, second - first - 1), &used);
    const int count = std::stoi(text.substr(second + 1), &used);
    return GridSpec{axis, start, stop, count};
  } catch (const std::exception&) {
    usage_error("--range expects numeric start:stop:count, got '" + text + "'");
  }
}

BerryMethod parse_method(const std::string& name)
{
  if (name == "closed")
    return BerryMethod::closed;
  if (name == "wilson")
    return BerryMethod::wilson;
  if (name == "adiabatic")
    return BerryMethod::adiabatic;
  usage_error("unknown method '" + name + "'");
}

std::string range_text(const GridSpec& g)
{
  return format_real(g.start) + ":" + format_real(g.stop) + ":" + std::to_string(g.count);
}

void meta_params(SweepTable& t, const ModelParams& p)
{
  t.meta.emplace_back("j", format_real(p.j));
  t.meta.emplace_back("jz", format_real(p.jz));
  t.meta.emplace_back("d", format_real(p.d));
  t.meta.emplace_back("b", format_real(p.b));
  t.meta.emplace_back("theta", format_real(p.theta));
}

void meta_prepend(SweepTable& t, const std::string& subcommand, const std::string& command)
{
  std::vector<std::pair<std::string, std::string>> head{
      {"tool", "xxzdm"},
      {"version", version_string},
      {"command", command},
      {"subcommand", subcommand},
  };
  t.meta.insert(t.meta.begin(), head.begin(), head.end());
}

std::string param_flags(const ModelParams& p)
{
  return "--j " + format_real(p.j) + " --jz " + format_real(p.jz) + " --d " + format_real(p.d) +
         " --b " + format_real(p.b) + " --theta " + format_real(p.theta);
}

void emit(const SweepTable& table, const CliOptions& opt, std::ostream& out, std::ostream& err)
{
  std::ostringstream buffer;
  if (opt.format == "json")
    write_json(buffer, table);
  else
    write_csv(buffer, table);
  if (opt.out_path.empty()) {
    out << buffer.str();
    return;
  }
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file)
    usage_error("cannot open output file '" + opt.out_path + "'");
  file << buffer.str();
  if (!file)
    usage_error("failed writing output file '" + opt.out_path + "'");
  (void)err;
}

SweepTable run_spectrum(const ModelParams& p, const CliOptions& opt)
{
  const Spectrum s = eigenvalues(p);
  SweepTable t;
  meta_params(t, p);
  meta_prepend(t, "spectrum",
               "xxzdm spectrum " + param_flags(p) + " --format " + opt.format);
  t.columns = {"e0", "e1", "e2", "e3", "min_gap"};
  t.rows.push_back({s.energies[0], s.energies[1], s.energies[2], s.energies[3], s.min_gap});
  t.flags.emplace_back();
  return t;
}

SweepTable run_eigenstate(const ModelParams& p, const CliOptions& opt)
{
  const Spectrum s = eigenvalues(p);
  const Real energy = s.energies[opt.level];
  EigenState state = [&] {
    try {
      return closed_form_state(p, opt.phi, energy);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateFormula)
        throw;
      return nullspace_state(build_hamiltonian(p, opt.phi), energy);
    }
  }();

  SweepTable t;
  meta_params(t, p);
  t.meta.emplace_back("phi", format_real(opt.phi));
  t.meta.emplace_back("level", std::to_string(opt.level));
  t.meta.emplace_back("gauge", state.gauge == Gauge::paper ? "paper" : "largest-component-real");
  meta_prepend(t, "eigenstate",
               "xxzdm eigenstate " + param_flags(p) + " --phi " + format_real(opt.phi) +
                   " --level " + std::to_string(opt.level) + " --format " + opt.format);
  t.columns = {"level",  "energy", "re_11", "im_11", "re_10", "im_10",
               "re_01",  "im_01",  "re_00", "im_00"};
  t.rows.push_back({static_cast<Real>(opt.level), state.energy, state.amp(0).real(),
                    state.amp(0).imag(), state.amp(1).real(), state.amp(1).imag(),
                    state.amp(2).real(), state.amp(2).imag(), state.amp(3).real(),
                    state.amp(3).imag()});
  t.flags.emplace_back();
  return t;
}

SweepTable run_berry(const ModelParams& p, const CliOptions& opt)
{
  const BerryMethod method = parse_method(opt.method);
  BerryResult r;
  std::string command = "xxzdm berry " + param_flags(p) + " --level " +
                        std::to_string(opt.level) + " --method " + opt.method;
  switch (method) {
    case BerryMethod::closed:
      r = berry_closed(p, opt.level);
      break;
    case BerryMethod::wilson:
      r = berry_wilson(p, opt.level, opt.grid);
      command += " --grid " + std::to_string(opt.grid);
      break;
    case BerryMethod::adiabatic:
      r = berry_adiabatic(p, opt.level, opt.period, opt.steps);
      command += " --period " + format_real(opt.period) + " --steps " + std::to_string(opt.steps);
      break;
  }
  command += " --format " + opt.format;

  SweepTable t;
  meta_params(t, p);
  t.meta.emplace_back("level", std::to_string(opt.level));
  t.meta.emplace_back("method", opt.method);
  meta_prepend(t, "berry", command);
  t.columns = {"level", "phase", "loop_min_gap"};
  std::vector<Real> row{static_cast<Real>(r.level), r.phase, r.loop_min_gap};
  if (method == BerryMethod::wilson) {
    t.columns.insert(t.columns.end(), {"grid", "min_step_overlap"});
    row.insert(row.end(), {static_cast<Real>(r.wilson.grid), r.wilson.min_step_overlap});
  } else if (method == BerryMethod::adiabatic) {
    t.columns.insert(t.columns.end(), {"period", "steps", "total_phase", "dynamical_phase",
                                       "final_overlap", "warning"});
    row.insert(row.end(),
               {r.adiabatic.period, static_cast<Real>(r.adiabatic.steps),
                r.adiabatic.total_phase, r.adiabatic.dynamical_phase, r.adiabatic.final_overlap,
                r.adiabatic.adiabatic_warning ? Real(1) : Real(0)});
  }
  t.rows.push_back(std::move(row));
  t.flags.emplace_back();
  return t;
}

SweepTable run_critical(const CliOptions& opt)
{
  const std::optional<Real> dm = critical_dm(opt.j, opt.jz);
  SweepTable t;
  t.meta.emplace_back("j", format_real(opt.j));
  t.meta.emplace_back("jz", format_real(opt.jz));
  meta_prepend(t, "critical",
               "xxzdm critical --j " + format_real(opt.j) + " --jz " + format_real(opt.jz) +
                   " --format " + opt.format);
  t.columns = {"critical_d"};
  t.rows.push_back({dm ? *dm : std::numeric_limits<Real>::quiet_NaN()});
  t.flags.emplace_back();
  return t;
}

struct FigurePreset {
  ModelParams base;
  std::optional<GridSpec> outer;
  GridSpec grid;
  bool berry = false;   // berry sweep (tracked, all levels) vs eigenvalue sweep
  bool tracked = false; // append branch columns to an eigenvalue sweep
};

FigurePreset figure_preset(int figure)
{
  const Real quarter_pi = M_PI / 4;
  switch (figure) {
    case 1:
      return {ModelParams(1, 1, 0.5, 0, quarter_pi), std::nullopt, {Axis::b, 0, 2, 201}, false,
              false};
    case 2:
      return {ModelParams(1, 1, 0, 1, quarter_pi), std::nullopt, {Axis::d, 0, 2, 201}, false,
              false};
    case 3:
      return {ModelParams(1, 1.1, 0, 1, 0), GridSpec{Axis::theta, 0, M_PI, 201},
              {Axis::d, 0, 1, 201}, true, false};
    case 4:
      return {ModelParams(1, 1.1, 0, 0.02, quarter_pi), GridSpec{Axis::b, 0.02, 1, 50},
              {Axis::d, 0, 1, 201}, true, false};
    case 5:
      return {ModelParams(1, 1.1, 0, 0.02, quarter_pi), std::nullopt, {Axis::d, 0.3, 0.6, 201},
              false, true};
  }
  usage_error("--figure must be in 1..5");
}

SweepTable run_scan(const CliOptions& opt, const std::optional<ModelParams>& explicit_params)
{
  if (opt.figure != 0) {
    const FigurePreset preset = figure_preset(opt.figure);
    SweepTable t = preset.berry
                       ? sweep_berry(preset.base, preset.outer, preset.grid, -1,
                                     BerryMethod::closed, opt.threads)
                       : (preset.tracked
                              ? sweep_eigenvalues_tracked(preset.base, preset.grid, opt.threads)
                              : sweep_eigenvalues(preset.base, preset.grid, opt.threads));
    meta_params(t, preset.base);
    if (preset.outer)
      t.meta.emplace_back(std::string("range_") + axis_name(preset.outer->axis),
                          range_text(*preset.outer));
    t.meta.emplace_back(std::string("range_") + axis_name(preset.grid.axis),
                        range_text(preset.grid));
    t.meta.emplace_back("quantity", preset.berry ? "berry" : "energies");
    if (preset.berry)
      t.meta.emplace_back("method", "closed");
    t.meta.emplace_back("figure", std::to_string(opt.figure));
    meta_prepend(t, "scan",
                 "xxzdm scan --figure " + std::to_string(opt.figure) + " --format " + opt.format);
    return t;
  }

  if (opt.axes.empty())
    usage_error("scan requires either --figure or --axis/--range");
  if (opt.axes.size() != opt.ranges.size())
    usage_error("each --axis needs a matching --range");
  if (opt.axes.size() > 2)
    usage_error("at most two --axis/--range pairs are supported");

  const ModelParams base = explicit_params.value();
  std::vector<GridSpec> grids;
  for (std::size_t i = 0; i < opt.axes.size(); ++i)
    grids.push_back(parse_range(parse_axis(opt.axes[i]), opt.ranges[i]));

  const bool berry_scan = opt.method_given || opt.level_given;
  std::string command = "xxzdm scan " + param_flags(base);
  for (const GridSpec& g : grids)
    command += std::string(" --axis ") + axis_name(g.axis) + " --range " + range_text(g);

  SweepTable t;
  if (berry_scan) {
    const BerryMethod method = parse_method(opt.method);
    if (method == BerryMethod::adiabatic)
      usage_error("scan supports --method closed or wilson");
    const int level = opt.level_given ? opt.level : -1;
    const std::optional<GridSpec> outer =
        grids.size() == 2 ? std::optional<GridSpec>(grids[0]) : std::nullopt;
    const GridSpec inner = grids.back();
    t = sweep_berry(base, outer, inner, level, method, opt.threads, opt.grid);
    if (opt.level_given)
      command += " --level " + std::to_string(opt.level);
    command += " --method " + opt.method;
    if (method == BerryMethod::wilson)
      command += " --grid " + std::to_string(opt.grid);
  } else {
    if (grids.size() != 1)
      usage_error("an eigenvalue scan takes exactly one --axis/--range pair");
    t = sweep_eigenvalues(base, grids[0], opt.threads);
  }
  command += " --format " + opt.format;

  meta_params(t, base);
  for (const GridSpec& g : grids)
    t.meta.emplace_back(std::string("range_") + axis_name(g.axis), range_text(g));
  t.meta.emplace_back("quantity", berry_scan ? "berry" : "energies");
  if (berry_scan) {
    t.meta.emplace_back("method", opt.method);
    if (opt.level_given)
      t.meta.emplace_back("level", std::to_string(opt.level));
  }
  meta_prepend(t, "scan", command);
  return t;
}

void print_error(std::ostream& err, const std::string& msg)
{
  const bool color = (&err == &std::cerr) && isatty(fileno(stderr)) &&
                     std::getenv("NO_COLOR") == nullptr;
  if (color)
    err << "\033[31merror:\033[0m " << msg << "\n";
  else
    err << "error: " << msg << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Spectrum, eigenstates and Berry phases of a driven two-spin XXZ model "
               "with a z-axis Dzyaloshinskii-Moriya interaction"};
  app.require_subcommand(1);

  CliOptions opt;

  const auto add_common = [&opt](CLI::App* sub, bool with_params) {
    if (with_params) {
      sub->add_option("--j", opt.j, "transverse exchange coupling")->capture_default_str();
      sub->add_option("--jz", opt.jz, "longitudinal exchange coupling")->capture_default_str();
      sub->add_option("--d", opt.d, "DM strength along z")->capture_default_str();
      sub->add_option("--b", opt.b, "field magnitude (>= 0)")->capture_default_str();
      auto* theta = sub->add_option("--theta", opt.theta, "field elevation in radians")
                        ->capture_default_str();
      sub->add_option("--theta-pi", opt.theta_pi, "field elevation in units of pi")
          ->excludes(theta);
    }
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", opt.out_path, "write the document to PATH instead of stdout");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "four eigenvalues and the minimum gap");
  add_common(spectrum, true);

  CLI::App* eigenstate = app.add_subcommand("eigenstate", "instantaneous eigenstate amplitudes");
  add_common(eigenstate, true);
  eigenstate->add_option("--phi", opt.phi, "field azimuth in radians")->capture_default_str();
  eigenstate->add_option("--level", opt.level, "ascending-energy level 0..3")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();

  CLI::App* berry = app.add_subcommand("berry", "Berry phase of one level");
  add_common(berry, true);
  berry->add_option("--level", opt.level, "ascending-energy level 0..3")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  berry->add_option("--method", opt.method, "closed | wilson | adiabatic")
      ->check(CLI::IsMember({"closed", "wilson", "adiabatic"}))
      ->capture_default_str();
  berry->add_option("--grid", opt.grid, "wilson loop grid size (>= 16)")->capture_default_str();
  berry->add_option("--period", opt.period, "adiabatic drive period")->capture_default_str();
  berry->add_option("--steps", opt.steps, "adiabatic integrator steps")->capture_default_str();

  CLI::App* critical = app.add_subcommand("critical", "critical DM strength sqrt(jz^2 - j^2)");
  critical->add_option("--j", opt.j, "transverse exchange coupling")->capture_default_str();
  critical->add_option("--jz", opt.jz, "longitudinal exchange coupling")->capture_default_str();
  add_common(critical, false);

  CLI::App* scan = app.add_subcommand("scan", "parameter sweeps (figure presets or --axis/--range)");
  add_common(scan, true);
  scan->add_option("--figure", opt.figure, "figure preset 1..5")->check(CLI::Range(1, 5));
  scan->add_option("--axis", opt.axes, "sweep axis (repeatable): b | d | theta");
  scan->add_option("--range", opt.ranges, "start:stop:count for the matching --axis (repeatable)");
  scan->add_option("--level", opt.level, "tracked level 0..3 (default: all four)")
      ->check(CLI::Range(0, 3));
  scan->add_option("--method", opt.method, "closed | wilson (berry scan)")
      ->check(CLI::IsMember({"closed", "wilson"}));
  scan->add_option("--grid", opt.grid, "wilson loop grid size")->capture_default_str();
  scan->add_option("--threads", opt.threads, "worker threads (0 = auto)")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("xxzdm");
  for (const std::string& a : args)
    argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err); // contextual help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, e.what());
    return 2;
  }

  opt.theta_pi_given = spectrum->count("--theta-pi") || eigenstate->count("--theta-pi") ||
                       berry->count("--theta-pi") || scan->count("--theta-pi");
  opt.level_given = eigenstate->count("--level") || berry->count("--level") || scan->count("--level");
  opt.method_given = berry->count("--method") || scan->count("--method");
  if (opt.theta_pi_given)
    opt.theta = opt.theta_pi * M_PI;

  // everything user-supplied is validated before any computation starts
  std::optional<ModelParams> params;
  try {
    if (*scan && opt.figure != 0) {
      const bool extra = scan->count("--j") || scan->count("--jz") || scan->count("--d") ||
                         scan->count("--b") || scan->count("--theta") ||
                         scan->count("--theta-pi") || !opt.axes.empty() || !opt.ranges.empty() ||
                         opt.level_given || opt.method_given;
      if (extra)
        usage_error("--figure presets fix all parameters; drop the other flags");
    } else if (!*critical) {
      params.emplace(opt.j, opt.jz, opt.d, opt.b, opt.theta);
    }
    if (*berry && opt.method == "wilson" && opt.grid < 16)
      usage_error("--grid must be >= 16");
  } catch (const Error& e) {
    print_error(err, e.what());
    return 2;
  } catch (const CLI::ParseError& e) {
    print_error(err, e.what());
    return 2;
  }

  try {
    SweepTable table;
    if (*spectrum)
      table = run_spectrum(*params, opt);
    else if (*eigenstate)
      table = run_eigenstate(*params, opt);
    else if (*berry)
      table = run_berry(*params, opt);
    else if (*critical)
      table = run_critical(opt);
    else
      table = run_scan(opt, params);
    emit(table, opt, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, e.what());
    return 2;
  } catch (const Error& e) {
    print_error(err, e.what());
    return e.kind() == ErrorKind::PreconditionViolated ? 2 : 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

} // namespace xxzdm
