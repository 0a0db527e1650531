#pragma once

#include <cmath>

// Correlation measures of the dimer's thermal two-qubit state. The state is
// Bell diagonal with equal correlation components c1 = c2 = c3 = c, so every
// measure below is a closed-form function of the single number c in
// [-1, 1/3]. Two independent oracles (a projective-measurement minimization
// for the discord and the full spin-flip eigenvalue procedure for the
// concurrence) are exposed alongside the closed forms and are used to verify
// them.
//
// All entropic quantities are in bits (log base 2), with 0 log 0 == 0.

namespace dimerstate::corr {

/// Bell-diagonal two-qubit state with isotropic correlation c.
/// Eigenvalues: lambda_S = (1-3c)/4 on the singlet, lambda_T = (1+c)/4
/// triply degenerate. Both nonnegative exactly when c is in [-1, 1/3].
struct BellDiagonalState {
  double c = 0.0;

  double lambda_singlet() const { return 0.25 * (1.0 - 3.0 * c); }
  double lambda_triplet() const { return 0.25 * (1.0 + c); }
  bool valid() const { return c >= -1.0 && c <= 1.0 / 3.0; }
};

/// All correlation measures of the thermal state at one temperature.
struct CorrelationPoint {
  double temperature_k;
  double reduced_susceptibility;  ///< x = c + 1
  double c;
  double mutual_information;      ///< bits
  double classical_correlation;   ///< bits
  double discord;                 ///< bits
  double concurrence;
  double eof;                     ///< bits
};

namespace detail {

/// x log2 x with the 0 log 0 convention, branch below 1e-300 so the singlet
/// endpoint is exact rather than a floating accident.
inline double xlog2(double x) {
  return x < 1e-300 ? 0.0 : x * std::log2(x);
}

// Unchecked closed forms, shared by the checked operations below and by the
// batch kernels. Callers guarantee c in [-1, 1/3].

inline double mutual_information_raw(double c) {
  const double lam_s = 0.25 * (1.0 - 3.0 * c);
  const double lam_t = 0.25 * (1.0 + c);
  return 2.0 + xlog2(lam_s) + 3.0 * xlog2(lam_t);
}

inline double classical_correlation_raw(double c) {
  const double a = std::fabs(c);
  return 0.5 * (xlog2(1.0 + a) + xlog2(1.0 - a));
}

inline double concurrence_raw(double c) {
  const double pre = -0.5 * (1.0 + 3.0 * c);
  return pre > 0.0 ? pre : 0.0;
}

inline double eof_from_concurrence_raw(double concurrence) {
  const double s = std::sqrt(std::max(0.0, 1.0 - concurrence * concurrence));
  const double lam_plus = 0.5 * (1.0 + s);
  const double lam_minus = 0.5 * (1.0 - s);
  // + 0.0 keeps the separable case at +0 rather than -0.
  return -(xlog2(lam_plus) + xlog2(lam_minus)) + 0.0;
}

}  // namespace detail

/// I(A:B) = 2 + lambda_S log2 lambda_S + 3 lambda_T log2 lambda_T.
/// Equivalently (1/4)[(4-3x) log2(4-3x) + 3x log2 x] with x = c + 1.
/// Throws std::domain_error for c outside [-1, 1/3].
double mutual_information(double c);

/// C_cl = (1/2)[(1+|c|) log2(1+|c|) + (1-|c|) log2(1-|c|)]: the classical
/// correlation extracted by the optimal projective measurement on one qubit.
double classical_correlation(double c);

/// Entropic quantum discord Q = I - C_cl; in [0, 1], zero only at c = 0.
double quantum_discord(double c);

/// Concurrence = max(0, -(1+3c)/2); vanishes for c >= -1/3.
double concurrence(double c);

/// Entanglement of formation from a concurrence value in [0, 1]:
/// binary entropy of (1 + sqrt(1 - C^2))/2. Throws std::domain_error
/// outside [0, 1].
double entanglement_of_formation(double concurrence_value);

/// Temperature below which the thermal state is entangled:
/// |J|/(k_B ln 3) for J < 0, zero otherwise (separable ground state).
/// J in kelvin-equivalent, result in kelvin.
double entanglement_temperature(double j_kelvin);

/// Every measure at one (J, T) point via the closed forms.
CorrelationPoint correlation_point(double j_kelvin, double temperature_k);

// ---------------------------------------------------------------------------
// Oracles. Independent computational routes used to verify the closed forms;
// they never call the functions above.

/// Discord by explicit construction: build the 4x4 density matrix, take the
/// mutual information from numerically diagonalized entropies, and maximize
/// the measured classical correlation over projective measurements on qubit
/// B, parametrized by Bloch angles (theta, phi). Deterministic 64x128 grid
/// followed by coordinate golden-section refinement to 1e-10 in the
/// objective.
double discord_oracle(const BellDiagonalState& state);

/// Concurrence by the spin-flip eigenvalue procedure: eigenvalues mu_i of
/// rho (sy x sy) rho* (sy x sy) computed through the equivalent symmetric
/// product sqrt(rho) rho~ sqrt(rho), then
/// max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)).
double concurrence_wootters_oracle(const BellDiagonalState& state);

}  // namespace dimerstate::corr
