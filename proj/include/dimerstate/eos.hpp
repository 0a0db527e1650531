#pragma once

#include <optional>
#include <string>
#include <vector>

// Third-order Birch-Murnaghan equation of state: evaluation, least-squares
// fitting of (volume, energy) series, and pressure -> volume inversion.
// Canonical units: energies in hartree, volumes in bohr^3, pressures in GPa.

namespace dimerstate::eos {

/// Birch-Murnaghan parameters. E(V0) = E0 and P(V0) = 0 by construction.
struct EosParams {
  double e0_hartree = 0.0;
  double v0_bohr3 = 0.0;   ///< equilibrium volume, > 0
  double b0_gpa = 0.0;     ///< bulk modulus at ambient pressure, > 0
  double b0_prime = 4.0;   ///< pressure derivative of the bulk modulus

  bool valid() const;
};

enum class SpinChannel { Singlet, Triplet, Unpolarized };

std::string to_string(SpinChannel channel);
SpinChannel parse_spin_channel(const std::string& name);

struct VolumeEnergy {
  double volume_bohr3;
  double energy_hartree;
};

/// One spin channel's energy-volume samples, in canonical units.
struct EnergyVolumeSeries {
  std::vector<VolumeEnergy> samples;  ///< sorted by volume when loaded
  SpinChannel channel = SpinChannel::Unpolarized;
  std::string source;                 ///< free-text provenance
};

struct FitReport {
  EosParams params;
  double rms_residual_hartree = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals_hartree;  ///< model minus data, per sample
};

struct FitOptions {
  int max_iterations = 500;
  double ssr_rel_tolerance = 1e-12;
  double step_tolerance = 1e-12;
};

/// E(V) = E0 + (9 V0 B0/16) { f^3 B0' + f^2 (6 - 4 eta) } with
/// eta = (V0/V)^(2/3), f = eta - 1. Throws std::domain_error for V <= 0.
double bm3_energy(const EosParams& p, double volume_bohr3);

/// Analytic P(V) = -dE/dV:
/// (3 B0/2) [x^(7/3) - x^(5/3)] {1 + (3/4)(B0'-4)[x^(2/3) - 1]}, x = V0/V.
/// Result in GPa. Throws std::domain_error for V <= 0.
double bm3_pressure(const EosParams& p, double volume_bohr3);

/// Least-squares Birch-Murnaghan fit by damped Gauss-Newton with an
/// analytic Jacobian, run in scaled variables (V/V0_init,
/// (E-E0_init)/spread). Without an explicit initial guess, V0 and B0 come
/// from the parabola through the three lowest-energy points, E0 from the
/// energy minimum, and B0' starts at 4.
///
/// Throws InputError for fewer than 5 samples, duplicate or nonpositive
/// volumes, or energies too flat to seed the parabola. Non-convergence is
/// reported through FitReport::converged, not an exception.
FitReport fit_bm3(const EnergyVolumeSeries& series,
                  std::optional<EosParams> init = std::nullopt,
                  const FitOptions& options = {});

/// Volume at which bm3_pressure equals `pressure_gpa`, by bisection on the
/// monotone bracket [0.5 V0, 1.2 V0] to 1e-12 relative in V.
/// Throws std::domain_error when the pressure is outside the bracket.
double invert_pressure(const EosParams& p, double pressure_gpa);

}  // namespace dimerstate::eos
