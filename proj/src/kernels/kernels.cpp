#include "dimerstate/kernels.hpp"

#include <cstdlib>
#include <string>

#include "dimerstate/correlations.hpp"
#include "dimerstate/dimer.hpp"
#include "dimerstate/errors.hpp"

namespace dimerstate::kernels {

#ifdef DIMERSTATE_HAVE_AVX2
const Backend& avx2_backend();  // defined in kernels_avx2.cpp
#endif

namespace {

// Scalar reference kernels: plain loops over the shared closed forms.

void correlation_vs_temperature_scalar(double j_kelvin, const double* temps,
                                       double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    c[i] = dimer::detail::correlation_closed_form(j_kelvin, temps[i]);
}

void discord_scalar(const double* c, double* q, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    q[i] = corr::detail::mutual_information_raw(c[i]) -
           corr::detail::classical_correlation_raw(c[i]);
}

void eof_scalar(const double* c, double* e, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    e[i] = corr::detail::eof_from_concurrence_raw(
        corr::detail::concurrence_raw(c[i]));
}

constexpr Backend kScalar{"scalar", correlation_vs_temperature_scalar,
                          discord_scalar, eof_scalar};

std::vector<const Backend*> detect_backends() {
  std::vector<const Backend*> list{&kScalar};
#ifdef DIMERSTATE_HAVE_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    list.push_back(&avx2_backend());
#endif
  return list;
}

const Backend* g_active = nullptr;

const Backend* initial_backend() {
  const auto& all = available_backends();
  if (const char* forced = std::getenv("DIMERSTATE_KERNELS")) {
    for (const Backend* b : all)
      if (forced == std::string_view(b->name)) return b;
    // Unknown override: fall through to the default rather than fail hard.
  }
  return all.back();  // most capable is registered last
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const std::vector<const Backend*>& available_backends() {
  static const std::vector<const Backend*> list = detect_backends();
  return list;
}

const Backend& active_backend() {
  if (!g_active) g_active = initial_backend();
  return *g_active;
}

void set_active_backend(std::string_view name) {
  for (const Backend* b : available_backends()) {
    if (name == b->name) {
      g_active = b;
      return;
    }
  }
  throw InputError("kernel backend '" + std::string(name) +
                   "' is not available on this machine");
}

}  // namespace dimerstate::kernels
