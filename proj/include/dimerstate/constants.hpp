#pragma once

// Physical constants (CODATA 2018) and derived conversion factors.
// The same values ship as data/constants.txt; tests compare the two so the
// file and the compiled constants cannot drift apart.

namespace dimerstate::constants {

// Base constants, SI.
inline constexpr double boltzmann_j_per_k = 1.380649e-23;      // exact
inline constexpr double bohr_magneton_j_per_t = 9.2740100783e-24;
inline constexpr double hartree_j = 4.3597447222071e-18;
inline constexpr double bohr_radius_m = 5.29177210903e-11;
inline constexpr double electron_volt_j = 1.602176634e-19;     // exact

// Derived conversion factors.
inline constexpr double hartree_in_kelvin = hartree_j / boltzmann_j_per_k;
inline constexpr double hartree_in_ev = hartree_j / electron_volt_j;
inline constexpr double bohr3_m3 =
    bohr_radius_m * bohr_radius_m * bohr_radius_m;
inline constexpr double hartree_per_bohr3_in_gpa = hartree_j / bohr3_m3 / 1e9;
inline constexpr double bohr3_in_angstrom3 =
    (bohr_radius_m / 1e-10) * (bohr_radius_m / 1e-10) *
    (bohr_radius_m / 1e-10);

}  // namespace dimerstate::constants
