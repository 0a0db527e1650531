#pragma once

#include <map>
#include <string>
#include <string_view>

#include "dimerstate/constants.hpp"

// Unit conversions for the quantities the pipeline moves around.
// Canonical internal units: energies in hartree (exchange couplings in
// kelvin-equivalent, i.e. E/k_B), volumes in bohr^3, pressures in GPa.

namespace dimerstate::units {

enum class EnergyUnit { Hartree, Rydberg, ElectronVolt, Kelvin };
enum class VolumeUnit { Bohr3, Angstrom3 };
enum class PressureUnit { GPa, HartreePerBohr3 };

/// Value of one unit in joules. Kelvin means the kelvin-equivalent E/k_B.
constexpr double energy_in_joule(EnergyUnit u) {
  switch (u) {
    case EnergyUnit::Hartree:
      return constants::hartree_j;
    case EnergyUnit::Rydberg:
      return constants::hartree_j / 2.0;  // exact by definition
    case EnergyUnit::ElectronVolt:
      return constants::electron_volt_j;
    case EnergyUnit::Kelvin:
      return constants::boltzmann_j_per_k;
  }
  return 0.0;  // unreachable
}

constexpr double volume_in_m3(VolumeUnit u) {
  switch (u) {
    case VolumeUnit::Bohr3:
      return constants::bohr3_m3;
    case VolumeUnit::Angstrom3:
      return 1e-30;
  }
  return 0.0;
}

constexpr double pressure_in_pa(PressureUnit u) {
  switch (u) {
    case PressureUnit::GPa:
      return 1e9;
    case PressureUnit::HartreePerBohr3:
      return constants::hartree_j / constants::bohr3_m3;
  }
  return 0.0;
}

constexpr double convert_energy(double value, EnergyUnit from, EnergyUnit to) {
  return from == to ? value
                    : value * (energy_in_joule(from) / energy_in_joule(to));
}

constexpr double convert_volume(double value, VolumeUnit from, VolumeUnit to) {
  return from == to ? value : value * (volume_in_m3(from) / volume_in_m3(to));
}

constexpr double convert_pressure(double value, PressureUnit from,
                                  PressureUnit to) {
  return from == to ? value
                    : value * (pressure_in_pa(from) / pressure_in_pa(to));
}

/// Parse a unit tag as it appears in CSV headers ("Ha", "Ry", "eV", "K",
/// "bohr3", "A3", "GPa", "Ha/bohr3"; case-insensitive, with a few aliases).
/// Throws InputError on an unknown tag.
EnergyUnit parse_energy_unit(std::string_view tag);
VolumeUnit parse_volume_unit(std::string_view tag);
PressureUnit parse_pressure_unit(std::string_view tag);

std::string to_string(EnergyUnit u);
std::string to_string(VolumeUnit u);
std::string to_string(PressureUnit u);

/// Read the shipped key=value constants file. Throws ParseError on
/// malformed lines. Used by tests to pin the compiled constants to the file.
std::map<std::string, double> load_constants_fixture(const std::string& path);

}  // namespace dimerstate::units
