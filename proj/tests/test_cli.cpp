#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dimerstate/ingest.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace dimerstate;
using testsup::CliResult;
using testsup::read_file;
using testsup::run_cli;
using testsup::TempDir;
using testsup::write_file;

namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

/// "param,value" CSV into a map.
std::map<std::string, std::string> parse_kv_csv(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& row : parse_csv(text))
    if (row.size() == 2) kv[row[0]] = row[1];
  return kv;
}

fs::path write_channel_csvs(const TempDir& dir) {
  const auto pair = testsup::crossover_pair();
  ingest::save_series_csv(
      testsup::synthetic_series(pair.singlet, 0.85, 1.1, 11,
                                eos::SpinChannel::Singlet),
      (dir.path() / "singlet.csv").string());
  ingest::save_series_csv(
      testsup::synthetic_series(pair.triplet, 0.85, 1.1, 11,
                                eos::SpinChannel::Triplet),
      (dir.path() / "triplet.csv").string());
  return dir.path();
}

bool have_cli() { return std::getenv("DIMERSTATE_CLI") != nullptr; }

}  // namespace

TEST_CASE("fit-eos recovers the synthetic parameters") {
  if (!have_cli()) return;
  TempDir dir("cli_fit");
  // E0 = 0 keeps the 12-significant-digit CSV effectively lossless.
  const auto truth = testsup::reference_eos();
  ingest::save_series_csv(testsup::synthetic_series(truth),
                          (dir.path() / "series.csv").string());

  const auto res = run_cli("fit-eos " + (dir.path() / "series.csv").string() +
                               " --out " + (dir.path() / "out").string(),
                           dir.path());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("V0") != std::string::npos);
  CHECK(res.out.find("converged") != std::string::npos);

  const auto kv =
      parse_kv_csv(read_file(dir.path() / "out" / "eos_fit.csv"));
  CHECK(std::stod(kv.at("v0[bohr3]")) == doctest::Approx(3271.0).epsilon(1e-7));
  CHECK(std::stod(kv.at("b0[GPa]")) == doctest::Approx(54.1).epsilon(1e-7));
  CHECK(std::stod(kv.at("b0_prime")) == doctest::Approx(3.3).epsilon(1e-7));
  CHECK(std::stod(kv.at("rms_residual[Ha]")) < 1e-10);
  CHECK(kv.at("converged") == "1");
  CHECK(fs::exists(dir.path() / "out" / "eos_fit_residuals.csv"));
}

TEST_CASE("fit-eos rejects an underdetermined series with exit 2") {
  if (!have_cli()) return;
  TempDir dir("cli_fit4");
  write_file(dir.path() / "four.csv",
             "volume[bohr3],energy[Ha]\n"
             "3000,-0.01\n3100,-0.02\n3200,-0.015\n3300,-0.005\n");
  const auto res = run_cli("fit-eos " + (dir.path() / "four.csv").string() +
                               " --out " + (dir.path() / "out").string(),
                           dir.path());
  CHECK(res.exit_code == 2);
  CHECK(!res.err.empty());
  CHECK_FALSE(fs::exists(dir.path() / "out" / "eos_fit.csv"));
}

TEST_CASE("fit-eos --plots writes an SVG without touching the CSV") {
  if (!have_cli()) return;
  TempDir dir("cli_svg");
  ingest::save_series_csv(testsup::synthetic_series(testsup::reference_eos()),
                          (dir.path() / "series.csv").string());
  const std::string base = "fit-eos " + (dir.path() / "series.csv").string();
  const auto plain =
      run_cli(base + " --out " + (dir.path() / "a").string(), dir.path());
  const auto plotted = run_cli(
      base + " --plots --out " + (dir.path() / "b").string(), dir.path());
  CHECK(plain.exit_code == 0);
  CHECK(plotted.exit_code == 0);
  CHECK(fs::exists(dir.path() / "b" / "eos_fit.svg"));
  CHECK_FALSE(fs::exists(dir.path() / "a" / "eos_fit.svg"));
  CHECK(read_file(dir.path() / "a" / "eos_fit.csv") ==
        read_file(dir.path() / "b" / "eos_fit.csv"));
  const auto svg = read_file(dir.path() / "b" / "eos_fit.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("jmap emits the coupling table with the T_e clamp") {
  if (!have_cli()) return;
  TempDir dir("cli_jmap");
  write_channel_csvs(dir);
  const auto res = run_cli(
      "jmap --singlet " + (dir.path() / "singlet.csv").string() +
          " --triplet " + (dir.path() / "triplet.csv").string() +
          " --pmin 0 --pmax 10 --psteps 26 --out " +
          (dir.path() / "out").string(),
      dir.path());
  REQUIRE(res.exit_code == 0);
  const auto rows =
      parse_csv(read_file(dir.path() / "out" / "coupling_table.csv"));
  REQUIRE(rows.size() == 27);  // header + 26
  CHECK(rows[0][0] == "pressure[GPa]");
  bool crossed = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double j = std::stod(rows[i][2]);
    if (j >= 0.0) {
      crossed = true;
      CHECK(rows[i][3] == "0");  // exactly zero in the emitted text
    }
  }
  CHECK(crossed);
  // First row at ambient pressure sits at the singlet V0.
  CHECK(std::stod(rows[1][1]) == doctest::Approx(3271.0).epsilon(1e-6));
}

TEST_CASE("jmap with identical channels keeps J constant") {
  if (!have_cli()) return;
  TempDir dir("cli_jconst");
  auto series = testsup::synthetic_series(testsup::reference_eos(), 0.85, 1.1,
                                          11, eos::SpinChannel::Singlet);
  ingest::save_series_csv(series, (dir.path() / "s.csv").string());
  series.channel = eos::SpinChannel::Triplet;
  ingest::save_series_csv(series, (dir.path() / "t.csv").string());
  const auto res =
      run_cli("jmap --singlet " + (dir.path() / "s.csv").string() +
                  " --triplet " + (dir.path() / "t.csv").string() +
                  " --pmin 0 --pmax 6 --psteps 7 --out " +
                  (dir.path() / "out").string(),
              dir.path());
  REQUIRE(res.exit_code == 0);
  const auto rows =
      parse_csv(read_file(dir.path() / "out" / "coupling_table.csv"));
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::fabs(std::stod(rows[i][2])) < 1e-6);
}

TEST_CASE("jmap accepts a single-pressure grid at P = 0") {
  if (!have_cli()) return;
  TempDir dir("cli_jone");
  write_channel_csvs(dir);
  const auto res = run_cli(
      "jmap --singlet " + (dir.path() / "singlet.csv").string() +
          " --triplet " + (dir.path() / "triplet.csv").string() +
          " --pmin 0 --pmax 0 --psteps 1 --out " +
          (dir.path() / "out").string(),
      dir.path());
  REQUIRE(res.exit_code == 0);
  const auto rows =
      parse_csv(read_file(dir.path() / "out" / "coupling_table.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(3271.0).epsilon(1e-6));
}

TEST_CASE("map output is byte-identical across runs and obeys the clamps") {
  if (!have_cli()) return;
  TempDir dir("cli_map");
  write_channel_csvs(dir);
  const std::string base =
      "map --singlet " + (dir.path() / "singlet.csv").string() +
      " --triplet " + (dir.path() / "triplet.csv").string() +
      " --pmin 0 --pmax 10 --psteps 30 --tmin 0.8 --tmax 240 --tsteps 60";

  const auto r1 =
      run_cli(base + " --out " + (dir.path() / "o1").string(), dir.path());
  const auto r2 =
      run_cli(base + " --out " + (dir.path() / "o2").string(), dir.path());
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  const auto q1 = read_file(dir.path() / "o1" / "discord_map.csv");
  CHECK(q1 == read_file(dir.path() / "o2" / "discord_map.csv"));
  const auto e1 = read_file(dir.path() / "o1" / "eof_map.csv");
  CHECK(e1 == read_file(dir.path() / "o2" / "eof_map.csv"));

  const auto q_rows = parse_csv(q1);
  const auto e_rows = parse_csv(e1);
  const auto table =
      parse_csv(read_file(dir.path() / "o1" / "coupling_table.csv"));
  REQUIRE(q_rows.size() == 61);
  REQUIRE(q_rows[0].size() == 31);
  CHECK(q_rows[0][0] == "T_K\\P_GPa");

  // Low-T antiferromagnetic corner: both measures on the unity plateau.
  CHECK(std::stod(q_rows[1][1]) >= 0.999);
  CHECK(std::stod(e_rows[1][1]) >= 0.999);

  std::vector<double> te;
  for (std::size_t i = 1; i < table.size(); ++i)
    te.push_back(std::stod(table[i][3]));
  for (std::size_t ti = 1; ti < e_rows.size(); ++ti) {
    const double t = std::stod(e_rows[ti][0]);
    for (std::size_t pi = 1; pi < e_rows[ti].size(); ++pi) {
      if (t >= te[pi - 1]) CHECK(e_rows[ti][pi] == "0");
      // Discord never hits zero anywhere on this grid (J != 0 everywhere).
      CHECK(std::stod(q_rows[ti][pi]) > 0.0);
    }
  }
}

TEST_CASE("map with an unreachable pressure range exits 2") {
  if (!have_cli()) return;
  TempDir dir("cli_mapbad");
  write_channel_csvs(dir);
  const auto res = run_cli(
      "map --singlet " + (dir.path() / "singlet.csv").string() +
          " --triplet " + (dir.path() / "triplet.csv").string() +
          " --pmin 0 --pmax 100000 --psteps 10 --tmin 1 --tmax 100 "
          "--tsteps 10 --out " +
          (dir.path() / "out").string(),
      dir.path());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("grid point") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path() / "out" / "discord_map.csv"));
  CHECK_FALSE(fs::exists(dir.path() / "out" / "coupling_table.csv"));

  // A bad temperature grid must not leave the coupling table behind either.
  const auto res2 = run_cli(
      "map --singlet " + (dir.path() / "singlet.csv").string() +
          " --triplet " + (dir.path() / "triplet.csv").string() +
          " --pmin 0 --pmax 5 --psteps 5 --tmin 10 --tmax 1 --tsteps 5 "
          "--out " +
          (dir.path() / "out2").string(),
      dir.path());
  CHECK(res2.exit_code == 2);
  CHECK_FALSE(fs::exists(dir.path() / "out2" / "coupling_table.csv"));
}

TEST_CASE("correlations table tracks the closed forms") {
  if (!have_cli()) return;
  TempDir dir("cli_corr");

  SUBCASE("antiferromagnetic J") {
    const auto res = run_cli(
        "correlations --j -10 --tmin 0.5 --tmax 30 --tsteps 60 --out " +
            (dir.path() / "afm").string(),
        dir.path());
    REQUIRE(res.exit_code == 0);
    const auto rows =
        parse_csv(read_file(dir.path() / "afm" / "correlations.csv"));
    REQUIRE(rows.size() == 61);
    double prev_q = 2.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double t = std::stod(rows[i][0]);
      const double q = std::stod(rows[i][5]);
      const double conc = std::stod(rows[i][6]);
      if (t > 9.1024)
        CHECK(conc == 0.0);
      else if (t < 9.10)
        CHECK(conc > 0.0);
      if (t > 10.0) {
        CHECK(q < prev_q);  // discord decays beyond |J|/k_B
        prev_q = q;
      }
    }
  }
  SUBCASE("J = 0 has no correlations at any temperature") {
    const auto res = run_cli(
        "correlations --j 0 --tmin 0.5 --tmax 30 --tsteps 20 --out " +
            (dir.path() / "zero").string(),
        dir.path());
    REQUIRE(res.exit_code == 0);
    const auto rows =
        parse_csv(read_file(dir.path() / "zero" / "correlations.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i][5] == "0");
      CHECK(rows[i][6] == "0");
      CHECK(rows[i][7] == "0");
    }
  }
  SUBCASE("ferromagnetic J: no entanglement, discord saturates at 1/3") {
    const auto res = run_cli(
        "correlations --j 10 --tmin 0.05 --tmax 30 --tsteps 40 --out " +
            (dir.path() / "fm").string(),
        dir.path());
    REQUIRE(res.exit_code == 0);
    const auto rows =
        parse_csv(read_file(dir.path() / "fm" / "correlations.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i][6] == "0");
      CHECK(rows[i][7] == "0");
    }
    CHECK(std::stod(rows[1][5]) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  }
  SUBCASE("bad grid is exit 2") {
    const auto res = run_cli("correlations --j -10 --tmin 5 --tmax 1 "
                             "--tsteps 10 --out " +
                                 (dir.path() / "bad").string(),
                             dir.path());
    CHECK(res.exit_code == 2);
    CHECK_FALSE(fs::exists(dir.path() / "bad" / "correlations.csv"));
  }
}

TEST_CASE("parse-qe converts outputs and reports failures") {
  if (!have_cli()) return;
  TempDir dir("cli_qe");
  auto pw_text = [](double v, double e_ry) {
    std::ostringstream ss;
    ss.precision(12);
    ss << "     Program PWSCF\n"
       << "     unit-cell volume          =    " << v << " (a.u.)^3\n"
       << "     ...\n"
       << "!    total energy              =   " << e_ry << " Ry\n";
    return ss.str();
  };
  write_file(dir.path() / "a.out", pw_text(3271.0, -2469.135780));
  write_file(dir.path() / "b.out", pw_text(3100.0, -2469.000000));

  SUBCASE("happy path writes a sorted series") {
    const auto res = run_cli(
        "parse-qe " + (dir.path() / "b.out").string() + " " +
            (dir.path() / "a.out").string() + " --channel singlet --out " +
            (dir.path() / "out").string(),
        dir.path());
    REQUIRE(res.exit_code == 0);
    const auto rows =
        parse_csv(read_file(dir.path() / "out" / "series.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == "volume[bohr3]");
    CHECK(std::stod(rows[1][0]) == doctest::Approx(3100.0));
    CHECK(std::stod(rows[2][0]) == doctest::Approx(3271.0));
    // Rydberg halves into hartree.
    CHECK(std::stod(rows[2][1]) == doctest::Approx(-1234.56789).epsilon(1e-9));
    CHECK(rows[1][2] == "singlet");
  }
  SUBCASE("a failing file lists on stderr and writes nothing") {
    write_file(dir.path() / "bad.out", "nothing useful here\n");
    const auto res = run_cli(
        "parse-qe " + (dir.path() / "a.out").string() + " " +
            (dir.path() / "bad.out").string() + " --out " +
            (dir.path() / "out2").string(),
        dir.path());
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("bad.out") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path() / "out2" / "series.csv"));
  }
}

TEST_CASE("config file supplies values, flags win") {
  if (!have_cli()) return;
  TempDir dir("cli_config");
  write_file(dir.path() / "run.toml",
             "[correlations]\nj = -10.0\ntmin = 1.0\ntmax = 5.0\n"
             "tsteps = 5\nout = \"" +
                 (dir.path() / "cfgout").string() + "\"\n");
  const auto res = run_cli("correlations --config " +
                               (dir.path() / "run.toml").string() +
                               " --tmax 20",
                           dir.path());
  REQUIRE(res.exit_code == 0);
  const auto rows =
      parse_csv(read_file(dir.path() / "cfgout" / "correlations.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(std::stod(rows[1][0]) == doctest::Approx(1.0));    // from config
  CHECK(std::stod(rows[5][0]) == doctest::Approx(20.0));   // flag overrode
}
