#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Batch kernels for the hot elementwise loops of the correlation maps.
// A scalar reference backend always exists; SIMD variants are compiled in
// per-ISA translation units and selected at runtime from CPU capabilities.
// Every backend computes the same functions; the scalar one is the
// reference the others are equivalence-tested against.
//
// Within one backend, results are a pure function of each input element, so
// recomputing any single element reproduces the batch value bit for bit.

namespace dimerstate::kernels {

struct Backend {
  const char* name;

  /// c(T) for an exchange coupling J (kelvin-equivalent) at each temperature.
  void (*correlation_vs_temperature)(double j_kelvin, const double* temps,
                                     double* c, std::size_t n);

  /// Entropic discord Q(c), bits. Inputs must lie in [-1, 1/3].
  void (*discord)(const double* c, double* q, std::size_t n);

  /// Entanglement of formation E(c) through the concurrence, bits.
  void (*eof)(const double* c, double* e, std::size_t n);
};

/// The scalar reference backend (always available).
const Backend& scalar_backend();

/// All backends usable on this machine, scalar first.
const std::vector<const Backend*>& available_backends();

/// The backend batch operations run on. Defaults to the most capable
/// available one; DIMERSTATE_KERNELS=<name> in the environment overrides
/// the default at startup.
const Backend& active_backend();

/// Force a specific backend (mainly for tests). Throws InputError if the
/// name is unknown or unavailable on this machine. Not safe to call while
/// batch operations run on other threads.
void set_active_backend(std::string_view name);

}  // namespace dimerstate::kernels
