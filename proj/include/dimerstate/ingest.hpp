#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dimerstate/eos.hpp"

// Ingestion of energy-volume data: plane-wave DFT output files and the
// canonical CSV series format.
//
// CSV schema: header "volume[<unit>],energy[<unit>][,channel]" with unit
// tags in square brackets (bohr3/Ha assumed, with a warning, when absent),
// comma separated, '#' comment lines skipped, UTF-8.

namespace dimerstate::ingest {

/// What a plane-wave SCF/relaxation output yields: the cell volume and the
/// total-energy trajectory (last entry is the converged one).
struct ParsedRun {
  std::optional<double> volume_bohr3;
  std::vector<double> energy_history_ry;  ///< in file order
  std::size_t lines_scanned = 0;
  std::string source;

  bool complete() const {
    return volume_bohr3 && *volume_bohr3 > 0.0 && !energy_history_ry.empty();
  }
  double final_energy_ry() const { return energy_history_ry.back(); }
};

/// Scan plane-wave output text for the two stable markers:
///   - "unit-cell volume ... <value> (a.u.)^3"
///   - lines starting with "!" containing "total energy ... <value> Ry"
/// The last occurrence of each wins (relaxation trajectories). All other
/// lines are ignored. Throws ParseError when no energy marker is found or a
/// marker's numeric field is malformed; never aborts on arbitrary input.
ParsedRun parse_pw_output(std::istream& text, std::string source = {});
ParsedRun parse_pw_output_text(const std::string& text,
                               std::string source = {});

/// Load a CSV series and convert to canonical units (bohr^3, hartree),
/// sorted by volume. When the file carries a channel column with mixed
/// channels, `filter` selects one; without a filter, mixed channels are
/// rejected. Throws InputError with row/column diagnostics on missing
/// columns, unknown unit tags, duplicate volumes, or fewer than 5 rows.
eos::EnergyVolumeSeries load_series_csv(
    const std::string& path,
    std::optional<eos::SpinChannel> filter = std::nullopt);

/// Write a series in the canonical CSV schema (volume[bohr3],energy[Ha],
/// channel), 12 significant digits.
void save_series_csv(const eos::EnergyVolumeSeries& series,
                     const std::string& path);

/// Shape diagnostics ahead of fitting.
struct SeriesDiagnostics {
  std::size_t point_count = 0;
  double volume_span_rel = 0.0;       ///< (Vmax-Vmin)/V at the energy minimum
  std::size_t convexity_violations = 0;
  bool interior_minimum = false;
  bool fit_ready = false;
  std::vector<std::string> notes;
};

/// Report point count, volume span, convexity violations around the energy
/// minimum, and a fit-readiness verdict. Diagnostics only; never throws on
/// odd shapes.
SeriesDiagnostics validate_series(const eos::EnergyVolumeSeries& series);

}  // namespace dimerstate::ingest
