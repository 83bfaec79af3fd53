// conspec: projection and relaxation experiments.
//
//   conspec test1 --function gauss1d --n-list 8,16,32
//   conspec test2 --scheme all --n 32 --tfinal 50 --output bkw.csv
//   conspec test3 --scheme mpfs --output bumps.csv
//
// Exit status: 0 success, 1 numerical failure, 2 usage error.
// Worker threads: CONSPEC_THREADS.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conspec/dynamics.hpp"
#include "conspec/experiments.hpp"
#include "conspec/manifest.hpp"

namespace {

using namespace conspec;

constexpr int exit_numerical = 1;
constexpr int exit_usage = 2;

std::string num(double x) { return conspec::detail::format_double(x); }

// Output path for one scheme; "--scheme all" splits a.csv into a_fs.csv, ...
std::string output_path(const RunManifest& m, SchemeVariant v) {
  if (m.output.empty() || m.scheme != "all") return m.output;
  const auto dot = m.output.rfind('.');
  const auto slash = m.output.rfind('/');
  const std::string suffix = "_" + std::string(to_string(v));
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return m.output + suffix;
  return m.output.substr(0, dot) + suffix + m.output.substr(dot);
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_header(std::ostream& os, RunManifest m, const std::string& path, std::optional<SchemeVariant> v) {
  m.output = path;
  if (v) m.scheme = std::string(to_string(*v));
  for (const auto& line : m.header_lines()) os << line << '\n';
}

int run_test1(const RunManifest& m) {
  Sink sink(m.output);
  auto& os = sink.out();
  write_header(os, m, m.output, std::nullopt);
  os << "N,projection,err_mass,err_momentum,err_energy,err_l2,err_l2_grid\n";
  for (int n : m.n_list)
    for (const auto& r : projection_errors(m.function, n, m.half_width, m.points_per_axis))
      os << r.modes << ',' << (r.conservative ? "conservative" : "plain") << ',' << num(r.err_mass) << ','
         << num(r.err_momentum) << ',' << num(r.err_energy) << ',' << num(r.err_l2) << ',' << num(r.err_l2_grid)
         << '\n';
  return 0;
}

int run_relaxation(const RunManifest& m, const std::string& initial) {
  const bool exact = initial == "bkw2d";
  const MomentVector target = initial_condition_moments(initial);
  const double t0 = temperature(target);
  for (SchemeVariant v : m.schemes()) {
    Solver solver(m.solver(v));
    const SpectralField f0 = initial_condition(initial, solver.grid());
    const std::string path = output_path(m, v);
    Sink sink(path);
    auto& os = sink.out();
    write_header(os, m, path, v);
    os << "time,mass,momentum_1,momentum_2,energy,temperature,temperature_error,l2_to_maxwellian,l2_to_exact,"
          "moment_loss_of_q\n";
    std::function<SpectralField(double)> reference;
    if (exact) reference = [&](double t) { return bkw_field(t, solver.grid()); };
    solver.integrate(
        f0,
        [&](const DiagnosticsRow& r) {
          os << num(r.time) << ',' << num(r.moments.mass) << ',' << num(r.moments.momentum[0]) << ','
             << num(r.moments.momentum[1]) << ',' << num(r.moments.energy) << ',' << num(r.temperature) << ','
             << num(std::abs(r.temperature - t0)) << ',' << num(r.l2_to_maxwellian) << ','
             << (r.l2_to_exact ? num(*r.l2_to_exact) : std::string()) << ',' << num(r.moment_loss_of_q) << '\n';
          if (!os) throw std::runtime_error("write failed");
        },
        target, reference);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative spectral projection and Boltzmann relaxation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CONSPEC_VERSION));

  std::map<std::string, std::optional<std::string>> flags;
  std::string config;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key=value config file (flags override it)");
    sub->add_option("--output", flags["output"], "output CSV (default: stdout)");
    sub->add_option("--seed", flags["seed"], "seed recorded in the manifest");
    sub->add_option("--half-width", flags["half_width"], "physical half-width L");
    sub->add_option("--points", flags["points_per_axis"], "collocation nodes per axis (0: 2N+2)");
  };
  auto* t1 = app.add_subcommand("test1", "projection errors and moments of 1D Gaussian data");
  common(t1);
  t1->add_option("--function", flags["function"], "gauss1d | bumps1d");
  t1->add_option("--n-list", flags["n_list"], "comma-separated mode counts");

  auto relaxation = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--scheme", flags["scheme"], "fs | mpfs | epfs | mepfs | all");
    sub->add_option("--n", flags["n"], "modes per axis");
    sub->add_option("--dt", flags["dt"], "time step");
    sub->add_option("--tfinal", flags["tfinal"], "final time");
    sub->add_option("--angles", flags["angles"], "angular discretization points");
    sub->add_option("--b0", flags["b0"], "collision kernel constant");
    sub->add_option("--pad", flags["pad"], "on | off");
    sub->add_option("--loss-rule", flags["loss_rule"], "angles | fine");
    sub->add_option("--stride", flags["stride"], "steps between diagnostic rows");
  };
  auto* t2 = app.add_subcommand("test2", "relaxation of BKW data to equilibrium");
  relaxation(t2);
  auto* t3 = app.add_subcommand("test3", "temperature conservation for two-bump data");
  relaxation(t3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  const std::string experiment = t1->parsed() ? "test1" : t2->parsed() ? "test2" : "test3";
  RunManifest manifest;
  try {
    std::map<std::string, std::string> given;
    for (const auto& [k, v] : flags)
      if (v) given[k] = *v;
    const auto file = config.empty() ? std::map<std::string, std::string>{} : read_config_file(config);
    manifest = parse_config(experiment, file, given);
  } catch (const std::invalid_argument& e) {
    std::cerr << "conspec: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (experiment == "test1") return run_test1(manifest);
    return run_relaxation(manifest, experiment == "test2" ? "bkw2d" : "bumps2d");
  } catch (const ConfigError& e) {
    std::cerr << "conspec: " << e.what() << '\n';
    return exit_usage;
  } catch (const NumericalError& e) {
    std::cerr << "conspec: numerical failure at t = " << e.time() << ": " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "conspec: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "conspec: " << e.what() << '\n';
    return exit_numerical;
  }
}
