#include "dimerstate/coupling_map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dimerstate/constants.hpp"
#include "dimerstate/correlations.hpp"
#include "dimerstate/kernels.hpp"

namespace dimerstate::pmap {

namespace {

bool in_bracket(const eos::EosParams& p, double v) {
  return v >= 0.5 * p.v0_bohr3 && v <= 1.2 * p.v0_bohr3;
}

double coupling_at_volume_unchecked(const ChannelPair& pair, double v) {
  return (eos::bm3_energy(pair.singlet, v) -
          eos::bm3_energy(pair.triplet, v)) *
         constants::hartree_in_kelvin;
}

}  // namespace

double coupling_at_volume(const ChannelPair& pair, double volume_bohr3) {
  if (!in_bracket(pair.singlet, volume_bohr3) ||
      !in_bracket(pair.triplet, volume_bohr3))
    throw std::domain_error("volume " + std::to_string(volume_bohr3) +
                            " bohr^3 outside a channel's valid range");
  return coupling_at_volume_unchecked(pair, volume_bohr3);
}

double coupling_zero_volume(const ChannelPair& pair, double v_lo,
                            double v_hi) {
  double j_lo = coupling_at_volume(pair, v_lo);
  const double j_hi = coupling_at_volume(pair, v_hi);
  if (j_lo == 0.0) return v_lo;
  if (j_hi == 0.0) return v_hi;
  if ((j_lo > 0.0) == (j_hi > 0.0))
    throw std::domain_error("J does not change sign on the given bracket");

  double lo = v_lo, hi = v_hi;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double j_mid = coupling_at_volume_unchecked(pair, mid);
    if ((j_mid > 0.0) == (j_lo > 0.0)) {
      lo = mid;
      j_lo = j_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CouplingTable coupling_vs_pressure(const ChannelPair& pair,
                                   std::span<const double> pressures_gpa) {
  for (std::size_t i = 1; i < pressures_gpa.size(); ++i)
    if (!(pressures_gpa[i] > pressures_gpa[i - 1]))
      throw std::domain_error("pressure grid must be strictly ascending");

  CouplingTable table;
  table.rows.reserve(pressures_gpa.size());
  for (std::size_t i = 0; i < pressures_gpa.size(); ++i) {
    const double pressure = pressures_gpa[i];
    CouplingRow row;
    row.pressure_gpa = pressure;
    try {
      // Probe at the singlet-EoS volume, then let the lower-energy channel
      // own the volume.
      const double v_singlet = eos::invert_pressure(pair.singlet, pressure);
      const bool singlet_ground =
          eos::bm3_energy(pair.singlet, v_singlet) <=
          eos::bm3_energy(pair.triplet, v_singlet);
      row.ground =
          singlet_ground ? eos::SpinChannel::Singlet : eos::SpinChannel::Triplet;
      row.volume_bohr3 = singlet_ground
                             ? v_singlet
                             : eos::invert_pressure(pair.triplet, pressure);
    } catch (const std::domain_error& err) {
      throw std::domain_error("pressure grid point " + std::to_string(i) +
                              " (P = " + std::to_string(pressure) +
                              " GPa): " + err.what());
    }
    row.j_kelvin = coupling_at_volume_unchecked(pair, row.volume_bohr3);
    row.te_kelvin = corr::entanglement_temperature(row.j_kelvin);
    table.rows.push_back(row);
  }
  return table;
}

CorrelationMap correlation_map(const CouplingTable& table,
                               std::span<const double> temperatures_k) {
  if (temperatures_k.empty() || !(temperatures_k.front() > 0.0))
    throw std::domain_error("temperature grid must be positive");
  for (std::size_t i = 1; i < temperatures_k.size(); ++i)
    if (!(temperatures_k[i] > temperatures_k[i - 1]))
      throw std::domain_error("temperature grid must be strictly ascending");

  const auto& kernel = kernels::active_backend();
  const std::size_t n_t = temperatures_k.size();
  const std::size_t n_p = table.rows.size();

  CorrelationMap map;
  map.temperatures_k.assign(temperatures_k.begin(), temperatures_k.end());
  map.pressures_gpa.reserve(n_p);
  for (const auto& row : table.rows) map.pressures_gpa.push_back(row.pressure_gpa);
  map.coupling = table;
  map.discord_bits.resize(n_t * n_p);
  map.eof_bits.resize(n_t * n_p);

  // Column at a time: J is constant down a pressure column.
  std::vector<double> c(n_t), q(n_t), e(n_t);
  for (std::size_t pi = 0; pi < n_p; ++pi) {
    const auto& row = table.rows[pi];
    kernel.correlation_vs_temperature(row.j_kelvin, map.temperatures_k.data(),
                                      c.data(), n_t);
    kernel.discord(c.data(), q.data(), n_t);
    kernel.eof(c.data(), e.data(), n_t);
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      const std::size_t at = map.index(ti, pi);
      map.discord_bits[at] = q[ti];
      // Above the entanglement temperature the concurrence is zero; pin the
      // cell so rounding in c cannot leak a stray 1e-30.
      map.eof_bits[at] =
          map.temperatures_k[ti] >= row.te_kelvin ? 0.0 : e[ti];
    }
  }
  return map;
}

MapCell correlation_map_cell(const CouplingTable& table, std::size_t pi,
                             double temperature_k) {
  const auto& kernel = kernels::active_backend();
  const auto& row = table.rows.at(pi);
  double c, q, e;
  kernel.correlation_vs_temperature(row.j_kelvin, &temperature_k, &c, 1);
  kernel.discord(&c, &q, 1);
  kernel.eof(&c, &e, 1);
  if (temperature_k >= row.te_kelvin) e = 0.0;
  return {q, e};
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

}  // namespace dimerstate::pmap
