#pragma once

#include <array>
#include <cmath>

// Thermal model of an isotropic spin-1/2 exchange dimer, H = -J S1.S2.
// Sign convention: J < 0 is antiferromagnetic (singlet ground state).
// J is carried in kelvin-equivalent (J/k_B) so every thermal expression is a
// pure number relation in T.

namespace dimerstate::dimer {

/// Exchange dimer parameters. g only rescales the dimensional
/// susceptibility; every correlation measure depends on the reduced form,
/// which is g-independent.
struct DimerModel {
  double j_kelvin = 0.0;   ///< exchange coupling J/k_B; J<0 antiferromagnetic
  double g = 2.0;          ///< Lande factor, > 0
  double n_dimers = 1.0;   ///< number of dimers entering the susceptibility

  bool valid() const {
    return std::isfinite(j_kelvin) && g > 0.0 && n_dimers >= 1.0;
  }
};

/// Boltzmann state of the dimer at one temperature. Populations are ordered
/// {singlet, triplet m=-1, m=0, m=+1}; the three triplet entries are equal.
struct ThermalDimerState {
  double temperature_k = 0.0;
  std::array<double, 4> populations{};  ///< sums to 1
  double correlation = 0.0;             ///< c = p(T+) + p(T-) - p(T0) - p(S)
};

namespace detail {

/// Spin-spin correlation c(J, T) in closed form,
///   c = (1 - e^{-J/T}) / (3 + e^{-J/T}),
/// rewritten per the sign of J so the exponential argument is never
/// positive (no overflow as T -> 0).
inline double correlation_closed_form(double j_kelvin, double temperature_k) {
  if (j_kelvin <= 0.0) {
    const double r = std::exp(j_kelvin / temperature_k);  // <= 1
    return (r - 1.0) / (3.0 * r + 1.0);
  }
  const double q = std::exp(-j_kelvin / temperature_k);  // < 1
  return (1.0 - q) / (3.0 + q);
}

/// Reduced susceptibility x = alpha T chi = 4 / (3 + e^{-J/T}) = c + 1,
/// with the same overflow guard.
inline double reduced_susceptibility_closed_form(double j_kelvin,
                                                 double temperature_k) {
  if (j_kelvin <= 0.0) {
    const double r = std::exp(j_kelvin / temperature_k);
    return 4.0 * r / (3.0 * r + 1.0);
  }
  const double q = std::exp(-j_kelvin / temperature_k);
  return 4.0 / (3.0 + q);
}

}  // namespace detail

/// Singlet/triplet energies of H = -J S1.S2 in the units of J:
/// E_S = (3/4) J, E_T = -(1/4) J, so E_S - E_T = J exactly.
struct DimerLevels {
  double singlet;
  double triplet;
};
DimerLevels energy_levels(const DimerModel& model);

/// Exact Boltzmann state at T > 0. Throws std::domain_error for T <= 0.
ThermalDimerState thermal_state(const DimerModel& model, double temperature_k);

/// Bleaney-Bowers susceptibility
///   chi(T) = [2 N (g mu_B)^2 / (k_B T)] / (3 + e^{-J/(k_B T)}),
/// in SI units of the expression above (J/T^2 per the model's N dimers).
/// Throws std::domain_error for T <= 0.
double susceptibility(const DimerModel& model, double temperature_k);

/// Reduced susceptibility x = alpha T chi with alpha = 2 k_B/(N (g mu_B)^2).
/// Dimensionless, in (0, 4/3); x = c + 1. Throws for T <= 0.
double reduced_susceptibility(const DimerModel& model, double temperature_k);

/// Result of mapping a measured susceptibility back to the correlation c.
struct SusceptibilityCorrelation {
  double c;             ///< clamped into [-1, 1/3]
  bool within_model;    ///< false if the raw value missed the range by >1e-9
};

/// c = alpha T chi - 1. The raw value must land in [-1, 1/3]:
///  - off by more than 1e-6: InconsistentDataError (not dimer data);
///  - off by more than 1e-9: returned with within_model = false;
///  - otherwise clamped to the range and returned as consistent.
/// Throws std::domain_error for T <= 0 or chi < 0.
SusceptibilityCorrelation correlation_from_susceptibility(double chi,
                                                          double temperature_k,
                                                          double g,
                                                          double n_dimers);

}  // namespace dimerstate::dimer
