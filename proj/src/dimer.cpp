#include "dimerstate/dimer.hpp"

#include <cmath>
#include <stdexcept>

#include "dimerstate/constants.hpp"
#include "dimerstate/errors.hpp"

namespace dimerstate::dimer {

namespace {

void require_temperature(double temperature_k) {
  if (!(temperature_k > 0.0))
    throw std::domain_error("temperature must be positive");
}

void require_model(const DimerModel& model) {
  if (!model.valid())
    throw std::domain_error("invalid dimer model (need finite J, g>0, N>=1)");
}

}  // namespace

DimerLevels energy_levels(const DimerModel& model) {
  require_model(model);
  return {0.75 * model.j_kelvin, -0.25 * model.j_kelvin};
}

ThermalDimerState thermal_state(const DimerModel& model,
                                double temperature_k) {
  require_model(model);
  require_temperature(temperature_k);

  const auto [e_singlet, e_triplet] = energy_levels(model);
  // Shift by the lower level so both Boltzmann weights have argument <= 0.
  const double e_min = std::min(e_singlet, e_triplet);
  const double w_singlet = std::exp(-(e_singlet - e_min) / temperature_k);
  const double w_triplet = std::exp(-(e_triplet - e_min) / temperature_k);
  const double z = w_singlet + 3.0 * w_triplet;

  ThermalDimerState state;
  state.temperature_k = temperature_k;
  state.populations = {w_singlet / z, w_triplet / z, w_triplet / z,
                       w_triplet / z};
  // c = p(T+) + p(T-) - p(T0) - p(S) = p_T - p_S for equal triplet weights.
  state.correlation = (w_triplet - w_singlet) / z;
  return state;
}

double susceptibility(const DimerModel& model, double temperature_k) {
  require_model(model);
  require_temperature(temperature_k);

  const double g_mu_b = model.g * constants::bohr_magneton_j_per_t;
  const double prefactor = 2.0 * model.n_dimers * g_mu_b * g_mu_b /
                           (constants::boltzmann_j_per_k * temperature_k);
  // 1/(3 + e^{-J/T}) evaluated through the reduced form's overflow guard.
  return prefactor *
         detail::reduced_susceptibility_closed_form(model.j_kelvin,
                                                    temperature_k) /
         4.0;
}

double reduced_susceptibility(const DimerModel& model, double temperature_k) {
  require_model(model);
  require_temperature(temperature_k);
  return detail::reduced_susceptibility_closed_form(model.j_kelvin,
                                                    temperature_k);
}

SusceptibilityCorrelation correlation_from_susceptibility(double chi,
                                                          double temperature_k,
                                                          double g,
                                                          double n_dimers) {
  require_temperature(temperature_k);
  if (!(chi >= 0.0)) throw std::domain_error("susceptibility must be >= 0");
  if (!(g > 0.0) || !(n_dimers >= 1.0))
    throw std::domain_error("need g > 0 and N >= 1");

  const double g_mu_b = g * constants::bohr_magneton_j_per_t;
  const double alpha =
      2.0 * constants::boltzmann_j_per_k / (n_dimers * g_mu_b * g_mu_b);
  const double c_raw = alpha * temperature_k * chi - 1.0;

  constexpr double c_max = 1.0 / 3.0;
  constexpr double hard = 1e-6;   // beyond this the data cannot be a dimer's
  constexpr double soft = 1e-9;   // beyond this we flag but keep going
  if (c_raw < -1.0 - hard || c_raw > c_max + hard)
    throw InconsistentDataError(
        "reduced susceptibility maps to c = " + std::to_string(c_raw) +
        ", outside [-1, 1/3]: not a dimer susceptibility");

  SusceptibilityCorrelation out;
  out.within_model = (c_raw >= -1.0 - soft && c_raw <= c_max + soft);
  out.c = std::min(std::max(c_raw, -1.0), c_max);
  return out;
}

}  // namespace dimerstate::dimer
