#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dimerstate/eos.hpp"

// Chains the two spin channels' equations of state into the
// pressure-resolved exchange coupling J(P), the entanglement temperature
// T_e(P), and (T, P) maps of discord and entanglement of formation.

namespace dimerstate::pmap {

/// Equations of state of the two magnetic configurations. J(V) is the
/// singlet-triplet energy difference at a common volume.
struct ChannelPair {
  eos::EosParams singlet;
  eos::EosParams triplet;
};

struct CouplingRow {
  double pressure_gpa;
  double volume_bohr3;
  double j_kelvin;
  double te_kelvin;
  eos::SpinChannel ground;  ///< channel whose EoS fixed the volume
};

/// J and T_e tabulated on an ascending pressure grid.
struct CouplingTable {
  std::vector<CouplingRow> rows;
};

/// Discord and EoF on a rectangular (T, P) grid, stored row-major with the
/// temperature index outer. Carries the coupling table it was built from.
struct CorrelationMap {
  std::vector<double> temperatures_k;  ///< ascending
  std::vector<double> pressures_gpa;   ///< ascending
  std::vector<double> discord_bits;    ///< nT x nP
  std::vector<double> eof_bits;        ///< nT x nP; exactly 0 for T >= T_e
  CouplingTable coupling;

  std::size_t index(std::size_t ti, std::size_t pi) const {
    return ti * pressures_gpa.size() + pi;
  }
};

/// J(V) = E_singlet(V) - E_triplet(V) in kelvin-equivalent, both channels
/// evaluated at the same volume. Throws std::domain_error when V is outside
/// either channel's invertible bracket.
double coupling_at_volume(const ChannelPair& pair, double volume_bohr3);

/// Volume in (v_lo, v_hi) where the two channel energies cross (J = 0),
/// by bisection; requires opposite signs of J at the ends.
double coupling_zero_volume(const ChannelPair& pair, double v_lo, double v_hi);

/// For each pressure: the volume comes from the magnetic ground channel's
/// EoS (the channel with the lower energy at that volume, probed at the
/// singlet-EoS volume), both channel energies are evaluated at that common
/// volume, and T_e follows from J. Throws std::domain_error naming the grid
/// point when a pressure is outside the invertible bracket.
CouplingTable coupling_vs_pressure(const ChannelPair& pair,
                                   std::span<const double> pressures_gpa);

/// Fill the (T, P) grid using the active batch kernels. Cells with
/// T >= T_e(P) clamp the EoF to exactly zero (the concurrence vanishes
/// there). Throws std::domain_error for a non-ascending or nonpositive
/// temperature grid.
CorrelationMap correlation_map(const CouplingTable& table,
                               std::span<const double> temperatures_k);

/// One cell recomputed through the same kernel path; reproduces the stored
/// map value bit for bit.
struct MapCell {
  double discord_bits;
  double eof_bits;
};
MapCell correlation_map_cell(const CouplingTable& table, std::size_t pi,
                             double temperature_k);

/// Evenly spaced grid, count >= 2.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace dimerstate::pmap
