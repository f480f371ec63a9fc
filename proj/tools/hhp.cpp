// Batch front end: JSON in, JSON (and CSV curves) out.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure (conditioning,
// aliasing guard, or a failed criterion in invariance-suite).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhp/hhp.hpp"
#include "hhp/suite.hpp"

namespace {

using hhp::io::json;

struct Flags {
  std::string map;
  std::string input;
  std::string matrix;
  std::optional<int> modes;
  std::optional<int> grid;
  double eps = 1e-3;
  int m = 0;
  int order = 2;
  double window = 0.02;
  double x = 1.0;
  std::string form = "line";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> tol;
};

struct Report {
  json body;
  std::vector<std::vector<double>> csv_rows;
  std::vector<std::string> csv_header;
};

hhp::io::RunConfig resolve(const Flags& f) {
  hhp::io::RunConfig c = hhp::io::load_run_config();
  if (f.modes) c.cutoff = *f.modes;
  if (f.grid) {
    if (*f.grid < 1) throw hhp::ValidationError("--grid must be positive");
    c.grid = static_cast<std::size_t>(*f.grid);
  }
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  c.validate();
  return c;
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw hhp::ValidationError(std::string("missing required flag ") + flag);
  return value;
}

hhp::CircleFunction load_function(const Flags& f) {
  return hhp::io::circle_function_from_json(hhp::io::parse_inline_or_file(require(f.input, "--input")));
}

hhp::MapDescriptor load_map(const Flags& f) {
  return hhp::io::map_descriptor_from_json(hhp::io::parse_inline_or_file(require(f.map, "--map")));
}

hhp::SampleGrid grid_of(const hhp::io::RunConfig& c) { return hhp::SampleGrid::uniform(c.grid); }

// --- subcommands -------------------------------------------------------------

Report cmd_norm(const Flags& f, const hhp::io::RunConfig&) {
  const auto fn = load_function(f);
  return {{{"command", "norm"}, {"norm", hhp::h_half_norm(fn)}, {"norm_squared", hhp::h_half_norm_squared(fn)}},
          {},
          {}};
}

Report cmd_hilbert(const Flags& f, const hhp::io::RunConfig&) {
  return {hhp::io::to_json(hhp::hilbert_transform(load_function(f))), {}, {}};
}

Report cmd_energy(const Flags& f, const hhp::io::RunConfig& c) {
  const auto fn = load_function(f);
  const double exact = hhp::h_half_norm_squared(fn);
  Report r;
  r.csv_header = {"grid", "energy", "relative_error"};
  auto relative = [exact](double e) { return exact > 0.0 ? std::abs(e - exact) / exact : e; };
  for (std::size_t m = 8; m < c.grid; m *= 2) {
    const double e = hhp::douglas_energy(fn, hhp::SampleGrid::half_offset(m));
    r.csv_rows.push_back({static_cast<double>(m), e, relative(e)});
  }
  const double energy = hhp::douglas_energy(fn, hhp::SampleGrid::half_offset(c.grid));
  r.csv_rows.push_back({static_cast<double>(c.grid), energy, relative(energy)});
  r.body = {{"command", "energy"},
            {"grid", c.grid},
            {"energy", energy},
            {"norm_squared", exact},
            {"relative_error", relative(energy)}};
  return r;
}

Report cmd_pullback_matrix(const Flags& f, const hhp::io::RunConfig& c) {
  const auto grid = grid_of(c);
  return {hhp::io::to_json(hhp::pullback_matrix(hhp::make_map(load_map(f), grid), c.cutoff, grid)), {}, {}};
}

Report cmd_period(const Flags& f, const hhp::io::RunConfig& c) {
  const auto grid = grid_of(c);
  return {hhp::io::to_json(hhp::period_matrix(hhp::make_map(load_map(f), grid), c.cutoff, grid)), {}, {}};
}

hhp::PeriodMatrix period_from_flags(const Flags& f, const hhp::io::RunConfig& c) {
  if (!f.matrix.empty()) return hhp::io::period_matrix_from_json(hhp::io::parse_inline_or_file(f.matrix));
  const auto grid = grid_of(c);
  return hhp::period_matrix(hhp::make_map(load_map(f), grid), c.cutoff, grid);
}

Report cmd_siegel_check(const Flags& f, const hhp::io::RunConfig& c) {
  const auto pm = period_from_flags(f, c);
  const double tol = f.tol.value_or(c.matrix_tol * (1.0 + hhp::max_abs(pm.Z)));
  json body = hhp::io::to_json(hhp::siegel_membership(pm, tol));
  body["tolerance"] = tol;
  return {body, {}, {}};
}

Report cmd_rauch_check(const Flags& f, const hhp::io::RunConfig& c) {
  const auto grid = grid_of(c);
  const int n = f.modes ? c.cutoff : 16;
  const hhp::Matrix d = hhp::rauch_derivative({f.m}, n);
  const int window = hhp::rauch_window(n);
  Report r;
  r.csv_header = {"eps", "defect"};
  double e = f.eps;
  std::vector<double> defects;
  for (int k = 0; k < 4; ++k, e *= 0.5) {
    defects.push_back(hhp::rauch_fd_defect(f.m, e, n, grid));
    r.csv_rows.push_back({e, defects.back()});
  }
  r.body = {{"command", "rauch-check"},
            {"m", f.m},
            {"eps", f.eps},
            {"cutoff", n},
            {"window", window},
            {"defect", defects[0]},
            {"defect_half_eps", defects[1]},
            {"halving_ratio", defects[1] / defects[0]},
            {"derivative_max", hhp::max_abs(d)},
            {"derivative_1_1", hhp::io::complex_to_json(d(0, 0))},
            {"derivative", hhp::io::matrix_to_json(d.topLeftCorner(window, window))}};
  return r;
}

Report cmd_equivariance(const Flags& f, const hhp::io::RunConfig& c) {
  const json pair = hhp::io::parse_inline_or_file(require(f.map, "--map"));
  if (!pair.is_array() || pair.size() != 2)
    throw hhp::ValidationError("equivariance --map expects a JSON array [phi, psi]");
  const auto grid = grid_of(c);
  const auto phi = hhp::make_map(hhp::io::map_descriptor_from_json(pair[0]), grid);
  const auto psi = hhp::make_map(hhp::io::map_descriptor_from_json(pair[1]), grid);
  const double defect = hhp::equivariance_defect(phi, psi, c.cutoff, grid);
  const hhp::Matrix z_both = hhp::period_matrix(hhp::compose(phi, psi), c.cutoff, grid).Z;
  const hhp::Matrix acted =
      hhp::siegel_action(hhp::pullback_matrix(psi, c.cutoff, grid), hhp::period_matrix(phi, c.cutoff, grid)).Z;
  return {{{"command", "equivariance"},
           {"cutoff", c.cutoff},
           {"defect", defect},
           {"action_defect", hhp::max_abs(z_both - acted)}},
          {},
          {}};
}

Report cmd_integrability(const Flags& f, const hhp::io::RunConfig& c) {
  const auto grid = grid_of(c);
  const int band = std::max(1, c.cutoff / 2);
  std::vector<hhp::CircleFunction> trials;
  if (!f.input.empty()) {
    const json j = hhp::io::parse_inline_or_file(f.input);
    if (j.is_array())
      for (const auto& item : j) trials.push_back(hhp::io::circle_function_from_json(item));
    else
      trials.push_back(hhp::io::circle_function_from_json(j));
  } else {
    const int b = std::min(band, 8);
    trials = {hhp::CircleFunction::cosine(1, b), hhp::CircleFunction::sine(1, b)};
    std::mt19937_64 rng(c.seed);
    for (int k = 0; k < 2; ++k) trials.push_back(hhp::suite::random_real_function(b, rng));
  }
  double residual = 0.0;
  std::string source;
  if (!f.matrix.empty()) {
    const auto pm = hhp::io::period_matrix_from_json(hhp::io::parse_inline_or_file(f.matrix));
    residual = hhp::integrability_residual(pm, trials, pm.cutoff(), grid);
    source = "period_matrix";
  } else {
    residual = hhp::integrability_residual(hhp::make_map(load_map(f), grid), trials, c.cutoff, grid);
    source = "map";
  }
  return {{{"command", "integrability"},
           {"source", source},
           {"trials", trials.size()},
           {"residual", residual},
           {"within_tolerance", residual <= f.tol.value_or(c.matrix_tol)}},
          {},
          {}};
}

Report cmd_quantum_hs(const Flags& f, const hhp::io::RunConfig&) {
  const auto fn = load_function(f);
  const int cutoff = f.modes ? *f.modes : 2 * fn.bandlimit();
  const auto op = hhp::quantum_derivative_matrix(fn, cutoff);
  const double hs = hhp::hs_norm(op);
  json body = {{"command", "quantum-hs"},
               {"hs_norm", hs},
               {"hs_squared", hs * hs},
               {"norm_squared", hhp::h_half_norm_squared(fn)},
               {"operator", hhp::io::to_json(op)}};
  if (fn.is_real()) {
    const auto b = hhp::hs_bracket_check(fn);
    body["lower_ok"] = b.lower_ok;
    body["upper_ok"] = b.upper_ok;
  }
  return {body, {}, {}};
}

Report cmd_kernel(const Flags& f, const hhp::io::RunConfig& c) {
  if (f.form != "line" && f.form != "chordal") throw hhp::ValidationError("--form must be line or chordal");
  const auto form = f.form == "line" ? hhp::KernelForm::line : hhp::KernelForm::chordal;
  if (!(f.window > 0.0)) throw hhp::ValidationError("--window must be positive");
  const std::vector<double> deltas{f.window, f.window / 2, f.window / 4};
  const auto h = hhp::make_map(load_map(f), grid_of(c));
  const auto d = hhp::diagonal_limit(h, f.order, f.x, deltas, form);
  Report r;
  r.body = hhp::io::to_json(d);
  r.body["command"] = "kernel";
  r.body["form"] = f.form;
  r.csv_header = {"delta", "kernel"};
  for (double delta = f.window; delta >= f.window / 64; delta *= 0.5)
    r.csv_rows.push_back({delta, hhp::kernel_eval(h, f.order, f.x, f.x + delta, form)});
  return r;
}

Report cmd_invariance_suite(const Flags&, const hhp::io::RunConfig& c) {
  hhp::suite::Options options;
  options.seed = c.seed;
  json rows = json::array();
  bool all = true;
  for (const auto& criterion : hhp::suite::all_criteria()) {
    const auto r = criterion(options);
    all = all && r.passed;
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"value", r.value},
                    {"threshold", r.threshold},
                    {"detail", r.detail}});
  }
  return {{{"command", "invariance-suite"},
           {"seed", c.seed},
           {"criteria", rows},
           {"all_passed", all},
           {"random_period_integrability", hhp::suite::random_period_integrability(options)}},
          {},
          {}};
}

std::string csv_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
  return out + ".csv";
}

void emit(const Report& r, const std::string& out) {
  const std::string text = r.body.dump(2) + "\n";
  std::cout << text;
  if (out.empty()) return;
  std::ofstream file(out, std::ios::binary);
  if (!file) throw hhp::ValidationError("cannot write " + out);
  file << text;
  if (r.csv_header.empty()) return;
  std::ofstream csv(csv_path(out), std::ios::binary);
  if (!csv) throw hhp::ValidationError("cannot write " + csv_path(out));
  for (std::size_t i = 0; i < r.csv_header.size(); ++i) csv << (i ? "," : "") << r.csv_header[i];
  csv << "\n";
  csv.precision(17);
  for (const auto& row : r.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-truncation period mapping toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--map", f.map, "map descriptor (inline JSON or file)");
  app.add_option("--input", f.input, "circle function (inline JSON or file)");
  app.add_option("--matrix", f.matrix, "period matrix (inline JSON or file)");
  app.add_option("--modes", f.modes, "cutoff N");
  app.add_option("--grid", f.grid, "grid size M");
  app.add_option("--eps", f.eps, "flow parameter");
  app.add_option("--m", f.m, "Beltrami monomial exponent");
  app.add_option("--order", f.order, "kernel order 0, 1 or 2");
  app.add_option("--window", f.window, "largest diagonal offset");
  app.add_option("--x", f.x, "kernel base point");
  app.add_option("--form", f.form, "kernel form: line or chordal");
  app.add_option("--seed", f.seed, "seed for randomized trials");
  app.add_option("--out", f.out, "report path");
  app.add_option("--tol", f.tol, "tolerance override");

  using Handler = Report (*)(const Flags&, const hhp::io::RunConfig&);
  struct Command {
    std::string name;
    std::string help;
    Handler run;
  };
  const std::vector<Command> commands{
      {"norm", "H^{1/2} norm of --input", cmd_norm},
      {"hilbert", "Hilbert transform of --input", cmd_hilbert},
      {"energy", "Douglas energy of --input against the Fourier norm", cmd_energy},
      {"pullback-matrix", "blocks A, B of the pullback by --map", cmd_pullback_matrix},
      {"period", "period matrix Z of --map", cmd_period},
      {"siegel-check", "Siegel disc membership of --matrix or --map", cmd_siegel_check},
      {"rauch-check", "finite differences against the first variation along zbar^m", cmd_rauch_check},
      {"equivariance", "Z(phi o psi) against T_psi . Z(phi) for --map [phi, psi]", cmd_equivariance},
      {"integrability", "multiplication-closed test for --map or --matrix", cmd_integrability},
      {"quantum-hs", "quantum derivative of --input and its Hilbert-Schmidt norm", cmd_quantum_hs},
      {"kernel", "diagonal limit of a welding kernel of --map", cmd_kernel},
      {"invariance-suite", "run every acceptance criterion", cmd_invariance_suite},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) subs.push_back(app.add_subcommand(c.name, c.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto config = resolve(f);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const Report r = commands[i].run(f, config);
      emit(r, config.out);
      if (commands[i].name == "invariance-suite" && !r.body.at("all_passed").get<bool>()) return 2;
      return 0;
    }
  } catch (const hhp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hhp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
