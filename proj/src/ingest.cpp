#include "dimerstate/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dimerstate/errors.hpp"
#include "dimerstate/format.hpp"
#include "dimerstate/units.hpp"

namespace dimerstate::ingest {

namespace {

/// First numeric token after the last '=' on the line.
double numeric_after_equals(const std::string& line, std::size_t lineno) {
  const auto eq = line.rfind('=');
  if (eq == std::string::npos)
    throw ParseError("marker line has no '=' separator", lineno);
  std::istringstream rest(line.substr(eq + 1));
  std::string token;
  if (!(rest >> token))
    throw ParseError("marker line has no numeric value", lineno);
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed numeric value '" + token + "'", lineno);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

/// "volume[bohr3]" -> {"volume", "bohr3"}; no brackets -> empty tag.
std::pair<std::string, std::string> split_header_cell(const std::string& cell,
                                                      std::size_t lineno) {
  const auto open = cell.find('[');
  if (open == std::string::npos) return {cell, {}};
  const auto close = cell.find(']', open);
  if (close == std::string::npos)
    throw ParseError("unterminated unit tag in header cell '" + cell + "'",
                     lineno);
  return {trim(cell.substr(0, open)),
          trim(cell.substr(open + 1, close - open - 1))};
}

}  // namespace

ParsedRun parse_pw_output(std::istream& text, std::string source) {
  ParsedRun run;
  run.source = std::move(source);

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(text, line)) {
    ++lineno;
    if (line.find("unit-cell volume") != std::string::npos &&
        line.find("(a.u.)^3") != std::string::npos) {
      run.volume_bohr3 = numeric_after_equals(line, lineno);
    } else if (!line.empty() && line[0] == '!' &&
               line.find("total energy") != std::string::npos) {
      run.energy_history_ry.push_back(numeric_after_equals(line, lineno));
    }
  }
  run.lines_scanned = lineno;
  if (run.energy_history_ry.empty())
    throw ParseError("no total-energy marker found after scanning " +
                     std::to_string(lineno) + " lines" +
                     (run.source.empty() ? "" : " of " + run.source));
  return run;
}

ParsedRun parse_pw_output_text(const std::string& text, std::string source) {
  std::istringstream in(text);
  return parse_pw_output(in, std::move(source));
}

eos::EnergyVolumeSeries load_series_csv(
    const std::string& path, std::optional<eos::SpinChannel> filter) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open series file '" + path + "'");

  std::string line;
  std::size_t lineno = 0;

  // Header row (first non-comment line).
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_csv_row(t);
    break;
  }
  if (header.empty()) throw InputError("'" + path + "' has no header row");

  int col_volume = -1, col_energy = -1, col_channel = -1;
  units::VolumeUnit vol_unit = units::VolumeUnit::Bohr3;
  units::EnergyUnit en_unit = units::EnergyUnit::Hartree;
  bool vol_tagged = false, en_tagged = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto [name, tag] = split_header_cell(header[i], lineno);
    if (name == "volume") {
      col_volume = static_cast<int>(i);
      if (!tag.empty()) {
        vol_unit = units::parse_volume_unit(tag);
        vol_tagged = true;
      }
    } else if (name == "energy") {
      col_energy = static_cast<int>(i);
      if (!tag.empty()) {
        en_unit = units::parse_energy_unit(tag);
        en_tagged = true;
      }
    } else if (name == "channel") {
      col_channel = static_cast<int>(i);
    }
  }
  if (col_volume < 0)
    throw InputError("'" + path + "': header is missing a 'volume' column");
  if (col_energy < 0)
    throw InputError("'" + path + "': header is missing an 'energy' column");
  if (!vol_tagged)
    std::cerr << "warning: " << path
              << ": no unit tag on 'volume', assuming bohr3\n";
  if (!en_tagged)
    std::cerr << "warning: " << path
              << ": no unit tag on 'energy', assuming Ha\n";

  eos::EnergyVolumeSeries series;
  series.source = path;
  std::optional<eos::SpinChannel> seen_channel;
  const std::size_t ncols =
      std::max({col_volume, col_energy, col_channel}) + 1;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv_row(t);
    if (cells.size() < ncols)
      throw InputError("'" + path + "' row " + std::to_string(lineno) +
                       ": expected " + std::to_string(ncols) +
                       " columns, got " + std::to_string(cells.size()));
    auto cell_value = [&](int col, const char* what) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[col], &used);
        if (used != cells[col].size()) throw std::invalid_argument("");
        return v;
      } catch (const std::exception&) {
        throw InputError("'" + path + "' row " + std::to_string(lineno) +
                         ": malformed " + what + " value '" + cells[col] +
                         "'");
      }
    };
    const double v_raw = cell_value(col_volume, "volume");
    const double e_raw = cell_value(col_energy, "energy");

    eos::SpinChannel row_channel = eos::SpinChannel::Unpolarized;
    if (col_channel >= 0) {
      try {
        row_channel = eos::parse_spin_channel(cells[col_channel]);
      } catch (const InputError& err) {
        throw InputError("'" + path + "' row " + std::to_string(lineno) +
                         ": " + err.what());
      }
    }
    if (filter && row_channel != *filter) continue;
    if (!seen_channel)
      seen_channel = row_channel;
    else if (*seen_channel != row_channel)
      throw InputError("'" + path +
                       "' mixes spin channels; pass a channel filter");

    series.samples.push_back(
        {units::convert_volume(v_raw, vol_unit, units::VolumeUnit::Bohr3),
         units::convert_energy(e_raw, en_unit, units::EnergyUnit::Hartree)});
  }

  if (series.samples.size() < 5)
    throw InputError("'" + path + "': need at least 5 data rows, got " +
                     std::to_string(series.samples.size()));
  if (seen_channel) series.channel = *seen_channel;
  if (filter) series.channel = *filter;

  std::sort(series.samples.begin(), series.samples.end(),
            [](const auto& a, const auto& b) {
              return a.volume_bohr3 < b.volume_bohr3;
            });
  for (std::size_t i = 1; i < series.samples.size(); ++i)
    if (series.samples[i].volume_bohr3 == series.samples[i - 1].volume_bohr3)
      throw InputError("'" + path + "': duplicate volume " +
                       format_number(series.samples[i].volume_bohr3));
  return series;
}

void save_series_csv(const eos::EnergyVolumeSeries& series,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "volume[bohr3],energy[Ha],channel\n";
  for (const auto& s : series.samples)
    out << format_number(s.volume_bohr3) << ','
        << format_number(s.energy_hartree) << ','
        << eos::to_string(series.channel) << '\n';
}

SeriesDiagnostics validate_series(const eos::EnergyVolumeSeries& series) {
  SeriesDiagnostics d;
  d.point_count = series.samples.size();
  if (d.point_count == 0) {
    d.notes.push_back("empty series");
    return d;
  }

  auto sorted = series.samples;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.volume_bohr3 < b.volume_bohr3;
  });

  std::size_t imin = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].energy_hartree < sorted[imin].energy_hartree) imin = i;

  d.volume_span_rel =
      (sorted.back().volume_bohr3 - sorted.front().volume_bohr3) /
      sorted[imin].volume_bohr3;
  d.interior_minimum = imin > 0 && imin + 1 < sorted.size();
  if (!d.interior_minimum)
    d.notes.push_back(
        "energy minimum sits on the boundary of the sampled volumes");

  // U-shape check: descending into the minimum, ascending out of it.
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const bool ok = i < imin
                        ? sorted[i].energy_hartree > sorted[i + 1].energy_hartree
                        : sorted[i].energy_hartree < sorted[i + 1].energy_hartree;
    if (!ok) {
      ++d.convexity_violations;
      d.notes.push_back("convexity violation between V=" +
                        format_number(sorted[i].volume_bohr3) + " and V=" +
                        format_number(sorted[i + 1].volume_bohr3));
    }
  }

  d.fit_ready = d.point_count >= 5 && d.interior_minimum;
  if (d.fit_ready && d.convexity_violations > 0)
    d.notes.push_back("series is noisy but still fit-ready");
  return d;
}

}  // namespace dimerstate::ingest
