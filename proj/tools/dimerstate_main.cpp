// dimerstate: ingest energy-volume data, fit Birch-Murnaghan equations of
// state, and map a spin dimer's thermal quantum correlations over
// temperature and pressure. CSV outputs are deterministic: identical inputs
// produce byte-identical files.
//
// Exit codes: 0 success, 2 rejected input, 3 numerical non-convergence.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dimerstate/coupling_map.hpp"
#include "dimerstate/correlations.hpp"
#include "dimerstate/eos.hpp"
#include "dimerstate/errors.hpp"
#include "dimerstate/format.hpp"
#include "dimerstate/ingest.hpp"
#include "dimerstate/svg.hpp"
#include "dimerstate/units.hpp"

namespace fs = std::filesystem;
using dimerstate::format_number;
using dimerstate::InputError;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 0;
  bool set() const { return steps > 0; }
};

struct RunConfig {
  std::string input;                 // fit-eos positional
  std::vector<std::string> inputs;   // parse-qe positionals
  std::string singlet_path;
  std::string triplet_path;
  std::string channel;
  double g = 2.0;
  double j_kelvin = 0.0;
  GridSpec t_grid;
  GridSpec p_grid{0.0, 10.0, 100};
  std::string out_dir = ".";
  bool plots = false;
};

std::vector<double> make_grid(const GridSpec& spec, const char* what,
                              bool positive_min) {
  if (spec.steps == 1 && spec.min == spec.max && !positive_min)
    return {spec.min};  // degenerate single-pressure grid
  if (spec.steps < 2)
    throw InputError(std::string(what) + " grid needs at least 2 points");
  if (!(spec.min < spec.max))
    throw InputError(std::string(what) + " grid needs min < max");
  if (positive_min && !(spec.min > 0.0))
    throw InputError(std::string(what) + " grid needs min > 0");
  return dimerstate::pmap::linspace(spec.min, spec.max, spec.steps);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

/// Load one channel's series; when the file mixes channels, keep the rows
/// matching `want`.
dimerstate::eos::EnergyVolumeSeries load_channel(
    const std::string& path, dimerstate::eos::SpinChannel want) {
  try {
    return dimerstate::ingest::load_series_csv(path);
  } catch (const InputError& err) {
    if (std::string(err.what()).find("mixes spin channels") ==
        std::string::npos)
      throw;
    return dimerstate::ingest::load_series_csv(path, want);
  }
}

/// Fit one channel, exiting with the non-convergence code on failure.
dimerstate::eos::EosParams fit_channel(
    const dimerstate::eos::EnergyVolumeSeries& series, const char* name,
    bool& converged) {
  const auto report = dimerstate::eos::fit_bm3(series);
  if (!report.converged) {
    std::cerr << "error: " << name << " channel fit did not converge after "
              << report.iterations << " iterations\n";
    converged = false;
  }
  return report.params;
}

void write_coupling_table(const dimerstate::pmap::CouplingTable& table,
                          const fs::path& path) {
  auto out = open_out(path);
  out << "pressure[GPa],volume[bohr3],j[K],te[K],ground_channel\n";
  for (const auto& row : table.rows)
    out << format_number(row.pressure_gpa) << ','
        << format_number(row.volume_bohr3) << ','
        << format_number(row.j_kelvin) << ',' << format_number(row.te_kelvin)
        << ',' << dimerstate::eos::to_string(row.ground) << '\n';
}

/// Matrix CSV: first row "T_K\P_GPa,<pressures...>", then one row per
/// temperature.
void write_map_matrix(const std::vector<double>& temps,
                      const std::vector<double>& pressures,
                      const std::vector<double>& cells, const fs::path& path) {
  auto out = open_out(path);
  out << "T_K\\P_GPa";
  for (double p : pressures) out << ',' << format_number(p);
  out << '\n';
  for (std::size_t ti = 0; ti < temps.size(); ++ti) {
    out << format_number(temps[ti]);
    for (std::size_t pi = 0; pi < pressures.size(); ++pi)
      out << ',' << format_number(cells[ti * pressures.size() + pi]);
    out << '\n';
  }
}

int cmd_fit_eos(const RunConfig& cfg) {
  std::optional<dimerstate::eos::SpinChannel> filter;
  if (!cfg.channel.empty())
    filter = dimerstate::eos::parse_spin_channel(cfg.channel);
  const auto series = dimerstate::ingest::load_series_csv(cfg.input, filter);

  const auto diag = dimerstate::ingest::validate_series(series);
  for (const auto& note : diag.notes)
    std::cerr << "note: " << cfg.input << ": " << note << '\n';
  if (!diag.fit_ready)
    throw InputError("'" + cfg.input + "' is not fit-ready (" +
                     std::to_string(diag.point_count) +
                     " points, interior minimum: " +
                     (diag.interior_minimum ? "yes" : "no") + ")");

  const auto report = dimerstate::eos::fit_bm3(series);

  fs::create_directories(cfg.out_dir);
  {
    auto out = open_out(fs::path(cfg.out_dir) / "eos_fit.csv");
    out << "param,value\n";
    out << "e0[Ha]," << format_number(report.params.e0_hartree) << '\n';
    out << "v0[bohr3]," << format_number(report.params.v0_bohr3) << '\n';
    out << "b0[GPa]," << format_number(report.params.b0_gpa) << '\n';
    out << "b0_prime," << format_number(report.params.b0_prime) << '\n';
    out << "rms_residual[Ha]," << format_number(report.rms_residual_hartree)
        << '\n';
    out << "iterations," << report.iterations << '\n';
    out << "converged," << (report.converged ? 1 : 0) << '\n';
  }
  {
    auto out = open_out(fs::path(cfg.out_dir) / "eos_fit_residuals.csv");
    out << "volume[bohr3],energy[Ha],fitted_energy[Ha],residual[Ha]\n";
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
      const auto& s = series.samples[i];
      const double fitted =
          dimerstate::eos::bm3_energy(report.params, s.volume_bohr3);
      out << format_number(s.volume_bohr3) << ','
          << format_number(s.energy_hartree) << ',' << format_number(fitted)
          << ',' << format_number(report.residuals_hartree[i]) << '\n';
    }
  }
  if (cfg.plots) {
    dimerstate::svg::Series data{"data", {}, {}, true};
    for (const auto& s : series.samples) {
      data.x.push_back(s.volume_bohr3);
      data.y.push_back(s.energy_hartree);
    }
    dimerstate::svg::Series curve{"fit", {}, {}, false};
    const double lo = series.samples.front().volume_bohr3;
    const double hi = series.samples.back().volume_bohr3;
    for (double v : dimerstate::pmap::linspace(lo, hi, 200)) {
      curve.x.push_back(v);
      curve.y.push_back(dimerstate::eos::bm3_energy(report.params, v));
    }
    dimerstate::svg::write_line_plot(
        (fs::path(cfg.out_dir) / "eos_fit.svg").string(),
        "Birch-Murnaghan fit (" + dimerstate::eos::to_string(series.channel) +
            ")",
        "V (bohr^3)", "E (Ha)", {curve, data});
  }

  std::cout << "channel: " << dimerstate::eos::to_string(series.channel)
            << "  points: " << series.samples.size() << '\n'
            << "V0 = " << format_number(report.params.v0_bohr3)
            << " bohr^3\n"
            << "B0 = " << format_number(report.params.b0_gpa) << " GPa\n"
            << "B0' = " << format_number(report.params.b0_prime) << '\n'
            << "E0 = " << format_number(report.params.e0_hartree) << " Ha\n"
            << "rms residual = " << format_number(report.rms_residual_hartree)
            << " Ha after " << report.iterations << " iterations ("
            << (report.converged ? "converged" : "NOT converged") << ")\n";
  return report.converged ? kExitOk : kExitNoConvergence;
}

int cmd_jmap(const RunConfig& cfg, bool also_map) {
  const auto singlet_series =
      load_channel(cfg.singlet_path, dimerstate::eos::SpinChannel::Singlet);
  const auto triplet_series =
      load_channel(cfg.triplet_path, dimerstate::eos::SpinChannel::Triplet);

  bool converged = true;
  dimerstate::pmap::ChannelPair pair;
  pair.singlet = fit_channel(singlet_series, "singlet", converged);
  pair.triplet = fit_channel(triplet_series, "triplet", converged);
  if (!converged) return kExitNoConvergence;

  // All computation happens before the first write: exit 2 must leave the
  // output directory untouched.
  const auto pressures = make_grid(cfg.p_grid, "pressure", false);
  const auto table = dimerstate::pmap::coupling_vs_pressure(pair, pressures);

  dimerstate::pmap::CorrelationMap map;
  if (also_map) {
    // Default temperature grid brackets the unity plateau and the decay.
    GridSpec t_grid = cfg.t_grid;
    if (!t_grid.set()) {
      double j_scale = 0.0;
      for (const auto& row : table.rows)
        j_scale = std::max(j_scale, std::fabs(row.j_kelvin));
      if (j_scale == 0.0) j_scale = 1.0;
      t_grid = {0.01 * j_scale, 3.0 * j_scale, 200};
    }
    const auto temps = make_grid(t_grid, "temperature", true);
    map = dimerstate::pmap::correlation_map(table, temps);
  }

  fs::create_directories(cfg.out_dir);
  write_coupling_table(table, fs::path(cfg.out_dir) / "coupling_table.csv");
  if (cfg.plots) {
    dimerstate::svg::Series j_curve{"J", {}, {}, false};
    dimerstate::svg::Series te_curve{"T_e", {}, {}, false};
    for (const auto& row : table.rows) {
      j_curve.x.push_back(row.pressure_gpa);
      j_curve.y.push_back(row.j_kelvin);
      te_curve.x.push_back(row.pressure_gpa);
      te_curve.y.push_back(row.te_kelvin);
    }
    dimerstate::svg::write_line_plot(
        (fs::path(cfg.out_dir) / "coupling_j.svg").string(),
        "Exchange coupling vs pressure", "P (GPa)", "J (K)", {j_curve});
    dimerstate::svg::write_line_plot(
        (fs::path(cfg.out_dir) / "coupling_te.svg").string(),
        "Entanglement temperature vs pressure", "P (GPa)", "T_e (K)",
        {te_curve});
  }

  if (!also_map) return kExitOk;

  write_map_matrix(map.temperatures_k, map.pressures_gpa, map.discord_bits,
                   fs::path(cfg.out_dir) / "discord_map.csv");
  write_map_matrix(map.temperatures_k, map.pressures_gpa, map.eof_bits,
                   fs::path(cfg.out_dir) / "eof_map.csv");
  if (cfg.plots) {
    dimerstate::svg::write_heatmap(
        (fs::path(cfg.out_dir) / "discord_map.svg").string(),
        "Quantum discord (bits)", "P (GPa)", "T (K)", map.pressures_gpa,
        map.temperatures_k, map.discord_bits);
    dimerstate::svg::write_heatmap(
        (fs::path(cfg.out_dir) / "eof_map.svg").string(),
        "Entanglement of formation (bits)", "P (GPa)", "T (K)",
        map.pressures_gpa, map.temperatures_k, map.eof_bits);
  }
  return kExitOk;
}

int cmd_correlations(const RunConfig& cfg) {
  GridSpec t_grid = cfg.t_grid;
  if (!t_grid.set()) {
    const double j_scale = std::max(std::fabs(cfg.j_kelvin), 1.0);
    t_grid = {0.01 * j_scale, 3.0 * j_scale, 200};
  }
  const auto temps = make_grid(t_grid, "temperature", true);

  fs::create_directories(cfg.out_dir);
  auto out = open_out(fs::path(cfg.out_dir) / "correlations.csv");
  out << "temperature[K],x,c,mutual_information[bits],"
         "classical_correlation[bits],discord[bits],concurrence,eof[bits]\n";
  for (double t : temps) {
    const auto pt = dimerstate::corr::correlation_point(cfg.j_kelvin, t);
    out << format_number(pt.temperature_k) << ','
        << format_number(pt.reduced_susceptibility) << ','
        << format_number(pt.c) << ',' << format_number(pt.mutual_information)
        << ',' << format_number(pt.classical_correlation) << ','
        << format_number(pt.discord) << ',' << format_number(pt.concurrence)
        << ',' << format_number(pt.eof) << '\n';
  }
  return kExitOk;
}

int cmd_parse_qe(const RunConfig& cfg) {
  const auto channel = cfg.channel.empty()
                           ? dimerstate::eos::SpinChannel::Unpolarized
                           : dimerstate::eos::parse_spin_channel(cfg.channel);

  dimerstate::eos::EnergyVolumeSeries series;
  series.channel = channel;
  std::vector<std::string> failures;
  for (const auto& path : cfg.inputs) {
    try {
      std::ifstream in(path);
      if (!in) throw InputError("cannot open file");
      const auto run = dimerstate::ingest::parse_pw_output(in, path);
      if (!run.complete())
        throw dimerstate::ParseError("no unit-cell volume marker found");
      series.samples.push_back(
          {*run.volume_bohr3,
           dimerstate::units::convert_energy(
               run.final_energy_ry(), dimerstate::units::EnergyUnit::Rydberg,
               dimerstate::units::EnergyUnit::Hartree)});
      series.source += (series.source.empty() ? "" : ";") + path;
    } catch (const std::exception& err) {
      failures.push_back(path + ": " + err.what());
    }
  }
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "error: " << f << '\n';
    return kExitInput;
  }

  std::sort(series.samples.begin(), series.samples.end(),
            [](const auto& a, const auto& b) {
              return a.volume_bohr3 < b.volume_bohr3;
            });
  fs::create_directories(cfg.out_dir);
  const auto out_path = fs::path(cfg.out_dir) / "series.csv";
  dimerstate::ingest::save_series_csv(series, out_path.string());
  std::cout << "wrote " << series.samples.size() << " rows to "
            << out_path.string() << '\n';
  return kExitOk;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_flag("--plots", cfg.plots, "Also emit SVG plots");
  // Options may come from a [subcommand] section of the --config file;
  // fallthrough lets --config itself appear after the subcommand name.
  cmd->configurable();
  cmd->fallthrough();
}

void add_t_grid(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tmin", cfg.t_grid.min, "Temperature grid minimum (K)");
  cmd->add_option("--tmax", cfg.t_grid.max, "Temperature grid maximum (K)");
  cmd->add_option("--tsteps", cfg.t_grid.steps,
                  "Temperature grid point count");
}

void add_p_grid(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--pmin", cfg.p_grid.min, "Pressure grid minimum (GPa)")
      ->capture_default_str();
  cmd->add_option("--pmax", cfg.p_grid.max, "Pressure grid maximum (GPa)")
      ->capture_default_str();
  cmd->add_option("--psteps", cfg.p_grid.steps, "Pressure grid point count")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Thermal quantum correlations of a spin-1/2 dimer from equations of "
      "state and magnetic susceptibility"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML config file with one section per subcommand; "
                 "command-line flags take precedence");

  RunConfig cfg;

  auto* fit = app.add_subcommand(
      "fit-eos", "Fit a Birch-Murnaghan equation of state to a CSV series");
  fit->add_option("input", cfg.input, "Energy-volume CSV file")->required();
  fit->add_option("--channel", cfg.channel,
                  "Spin channel to select from a mixed file");
  add_common_flags(fit, cfg);

  auto* jmap = app.add_subcommand(
      "jmap", "Exchange coupling and entanglement temperature vs pressure");
  jmap->add_option("--singlet", cfg.singlet_path, "Singlet-channel CSV")
      ->required();
  jmap->add_option("--triplet", cfg.triplet_path, "Triplet-channel CSV")
      ->required();
  add_p_grid(jmap, cfg);
  add_common_flags(jmap, cfg);

  auto* map = app.add_subcommand(
      "map", "Discord and entanglement-of-formation maps over (T, P)");
  map->add_option("--singlet", cfg.singlet_path, "Singlet-channel CSV")
      ->required();
  map->add_option("--triplet", cfg.triplet_path, "Triplet-channel CSV")
      ->required();
  map->add_option("--g", cfg.g,
                  "Lande factor (reduced quantities do not depend on it)")
      ->capture_default_str();
  add_p_grid(map, cfg);
  add_t_grid(map, cfg);
  add_common_flags(map, cfg);

  auto* corr = app.add_subcommand(
      "correlations", "Correlation measures vs temperature for a fixed J");
  corr->add_option("--j", cfg.j_kelvin, "Exchange coupling J in kelvin")
      ->required();
  corr->add_option("--g", cfg.g,
                   "Lande factor (reduced quantities do not depend on it)")
      ->capture_default_str();
  add_t_grid(corr, cfg);
  add_common_flags(corr, cfg);

  auto* parseqe = app.add_subcommand(
      "parse-qe", "Convert plane-wave DFT output files to a CSV series");
  parseqe->add_option("inputs", cfg.inputs, "DFT output files")
      ->required()
      ->expected(-1);
  parseqe->add_option("--channel", cfg.channel,
                      "Spin channel tag for the series");
  add_common_flags(parseqe, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (fit->parsed()) return cmd_fit_eos(cfg);
    if (jmap->parsed()) return cmd_jmap(cfg, /*also_map=*/false);
    if (map->parsed()) return cmd_jmap(cfg, /*also_map=*/true);
    if (corr->parsed()) return cmd_correlations(cfg);
    if (parseqe->parsed()) return cmd_parse_qe(cfg);
  } catch (const std::exception& err) {
    // InputError, ParseError, and domain errors all mean bad input here;
    // fit non-convergence returns 3 from inside the command.
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
