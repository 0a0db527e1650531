#include "dimerstate/eos.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dimerstate/constants.hpp"
#include "dimerstate/errors.hpp"

namespace dimerstate::eos {

namespace {

void require_volume(double v) {
  if (!(v > 0.0)) throw std::domain_error("volume must be positive");
}

/// Energy of the dimensionless BM3 form with B0 in energy/volume units:
/// e(v) = e0 + (9 v0 b0 / 16) [f^3 b0p + f^2 (6 - 4 eta)].
double bm3_energy_scaled(double e0, double v0, double b0, double b0p,
                         double v) {
  const double eta = std::cbrt((v0 / v) * (v0 / v));
  const double f = eta - 1.0;
  return e0 + 9.0 * v0 * b0 / 16.0 *
                  (f * f * f * b0p + f * f * (6.0 - 4.0 * eta));
}

/// Gradient of bm3_energy_scaled with respect to (e0, v0, b0, b0p).
std::array<double, 4> bm3_gradient_scaled(double v0, double b0, double b0p,
                                          double v) {
  const double eta = std::cbrt((v0 / v) * (v0 / v));
  const double f = eta - 1.0;
  const double shape = f * f * f * b0p + f * f * (6.0 - 4.0 * eta);
  const double dshape_deta =
      3.0 * f * f * b0p + 2.0 * f * (6.0 - 4.0 * eta) - 4.0 * f * f;
  const double amp = 9.0 * v0 * b0 / 16.0;
  return {
      1.0,                                                        // d/de0
      9.0 * b0 / 16.0 * shape + amp * dshape_deta * (2.0 / 3.0) * eta / v0,
      9.0 * v0 / 16.0 * shape,                                    // d/db0
      amp * f * f * f,                                            // d/db0p
  };
}

/// Solve a symmetric positive 4x4 system by Gaussian elimination with
/// partial pivoting. Returns false when the matrix is numerically singular.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
            std::array<double, 4>& x) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double m = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

void check_series(const EnergyVolumeSeries& series) {
  if (series.samples.size() < 5)
    throw InputError("need at least 5 energy-volume samples, got " +
                     std::to_string(series.samples.size()));
  std::vector<double> volumes;
  volumes.reserve(series.samples.size());
  for (const auto& s : series.samples) {
    if (!(s.volume_bohr3 > 0.0))
      throw InputError("volumes must be strictly positive");
    volumes.push_back(s.volume_bohr3);
  }
  std::sort(volumes.begin(), volumes.end());
  if (std::adjacent_find(volumes.begin(), volumes.end()) != volumes.end())
    throw InputError("duplicate volumes in series");
}

/// Parabola through the three lowest-energy samples seeds (E0, V0, B0).
EosParams initial_guess(const EnergyVolumeSeries& series) {
  std::vector<VolumeEnergy> pts = series.samples;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.energy_hartree < b.energy_hartree;
  });
  const auto& p0 = pts[0];
  const auto& p1 = pts[1];
  const auto& p2 = pts[2];

  // Quadratic through three points via divided differences.
  const double d01 = (p1.energy_hartree - p0.energy_hartree) /
                     (p1.volume_bohr3 - p0.volume_bohr3);
  const double d12 = (p2.energy_hartree - p1.energy_hartree) /
                     (p2.volume_bohr3 - p1.volume_bohr3);
  const double curvature_half = (d12 - d01) / (p2.volume_bohr3 - p0.volume_bohr3);
  if (!(curvature_half > 0.0))
    throw InputError(
        "series is degenerate around its minimum (no upward curvature); "
        "cannot seed the fit");

  EosParams init;
  init.v0_bohr3 =
      0.5 * (p0.volume_bohr3 + p1.volume_bohr3) - 0.5 * d01 / curvature_half;
  if (!(init.v0_bohr3 > 0.0)) init.v0_bohr3 = p0.volume_bohr3;
  init.e0_hartree = p0.energy_hartree;
  init.b0_gpa = init.v0_bohr3 * 2.0 * curvature_half *
                constants::hartree_per_bohr3_in_gpa;
  init.b0_prime = 4.0;
  return init;
}

}  // namespace

bool EosParams::valid() const {
  return std::isfinite(e0_hartree) && v0_bohr3 > 0.0 && b0_gpa > 0.0 &&
         std::isfinite(b0_prime);
}

std::string to_string(SpinChannel channel) {
  switch (channel) {
    case SpinChannel::Singlet:
      return "singlet";
    case SpinChannel::Triplet:
      return "triplet";
    case SpinChannel::Unpolarized:
      return "unpolarized";
  }
  return "?";
}

SpinChannel parse_spin_channel(const std::string& name) {
  if (name == "singlet") return SpinChannel::Singlet;
  if (name == "triplet") return SpinChannel::Triplet;
  if (name == "unpolarized") return SpinChannel::Unpolarized;
  throw InputError("unknown spin channel '" + name + "'");
}

double bm3_energy(const EosParams& p, double volume_bohr3) {
  require_volume(volume_bohr3);
  const double b0 = p.b0_gpa / constants::hartree_per_bohr3_in_gpa;
  return bm3_energy_scaled(p.e0_hartree, p.v0_bohr3, b0, p.b0_prime,
                           volume_bohr3);
}

double bm3_pressure(const EosParams& p, double volume_bohr3) {
  require_volume(volume_bohr3);
  const double x = p.v0_bohr3 / volume_bohr3;
  const double x23 = std::cbrt(x * x);
  const double x53 = x * x23;
  const double x73 = x53 * x23;
  return 1.5 * p.b0_gpa * (x73 - x53) *
         (1.0 + 0.75 * (p.b0_prime - 4.0) * (x23 - 1.0));
}

FitReport fit_bm3(const EnergyVolumeSeries& series,
                  std::optional<EosParams> init, const FitOptions& options) {
  check_series(series);

  const EosParams start = init ? *init : initial_guess(series);
  if (!start.valid()) throw InputError("invalid initial parameters for fit");

  // Scale the problem: volumes by V0_init, energies by their spread about
  // E0_init. Keeps the Jacobian columns within a few orders of each other.
  const double v_scale = start.v0_bohr3;
  double spread = 0.0;
  for (const auto& s : series.samples)
    spread = std::max(spread, std::fabs(s.energy_hartree - start.e0_hartree));
  if (spread <= 0.0) spread = 1.0;

  const std::size_t n = series.samples.size();
  std::vector<double> v(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = series.samples[i].volume_bohr3 / v_scale;
    e[i] = (series.samples[i].energy_hartree - start.e0_hartree) / spread;
  }

  // Scaled parameter vector: (e0, v0, b0, b0p) with b0 in scaled
  // energy/volume units.
  std::array<double, 4> p = {
      0.0, 1.0,
      start.b0_gpa / constants::hartree_per_bohr3_in_gpa * v_scale / spread,
      start.b0_prime};

  auto ssr_of = [&](const std::array<double, 4>& q) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = bm3_energy_scaled(q[0], q[1], q[2], q[3], v[i]) - e[i];
      ssr += r * r;
    }
    return ssr;
  };

  double ssr = ssr_of(p);
  double lambda = 1e-4;
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    // Normal equations from the analytic Jacobian.
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const double r = bm3_energy_scaled(p[0], p[1], p[2], p[3], v[i]) - e[i];
      const auto g = bm3_gradient_scaled(p[1], p[2], p[3], v[i]);
      for (int a = 0; a < 4; ++a) {
        jtr[a] += g[a] * r;
        for (int b = a; b < 4; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

    // Levenberg damping, factor 10 up and down.
    bool stepped = false;
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto damped = jtj;
      for (int a = 0; a < 4; ++a)
        damped[a][a] += lambda * std::max(jtj[a][a], 1e-30);
      std::array<double, 4> delta{};
      std::array<double, 4> rhs = {-jtr[0], -jtr[1], -jtr[2], -jtr[3]};
      if (!solve4(damped, rhs, delta)) {
        lambda *= 10.0;
        continue;
      }
      const std::array<double, 4> trial = {p[0] + delta[0], p[1] + delta[1],
                                           p[2] + delta[2], p[3] + delta[3]};
      if (!(trial[1] > 0.0) || !(trial[2] > 0.0)) {
        lambda *= 10.0;  // unphysical step
        continue;
      }
      const double trial_ssr = ssr_of(trial);
      if (trial_ssr <= ssr) {
        const double step_norm =
            std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] +
                      delta[2] * delta[2] + delta[3] * delta[3]);
        const double rel_drop = (ssr - trial_ssr) / std::max(ssr, 1e-300);
        p = trial;
        ssr = trial_ssr;
        lambda = std::max(lambda / 10.0, 1e-14);
        stepped = true;
        if (rel_drop < options.ssr_rel_tolerance ||
            step_norm < options.step_tolerance)
          converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (converged || !stepped) {
      converged = converged || !stepped;  // stuck at a minimum counts
      ++iter;
      break;
    }
  }

  FitReport report;
  report.params.e0_hartree = start.e0_hartree + p[0] * spread;
  report.params.v0_bohr3 = p[1] * v_scale;
  report.params.b0_gpa =
      p[2] * spread / v_scale * constants::hartree_per_bohr3_in_gpa;
  report.params.b0_prime = p[3];
  report.iterations = iter;
  report.converged = converged;

  report.residuals_hartree.reserve(n);
  double ssr_ha = 0.0;
  for (const auto& s : series.samples) {
    const double r =
        bm3_energy(report.params, s.volume_bohr3) - s.energy_hartree;
    report.residuals_hartree.push_back(r);
    ssr_ha += r * r;
  }
  report.rms_residual_hartree = std::sqrt(ssr_ha / static_cast<double>(n));
  return report;
}

double invert_pressure(const EosParams& p, double pressure_gpa) {
  if (!p.valid()) throw std::domain_error("invalid EoS parameters");
  double lo = 0.5 * p.v0_bohr3;  // high-pressure end
  double hi = 1.2 * p.v0_bohr3;  // tensile end
  const double p_max = bm3_pressure(p, lo);
  const double p_min = bm3_pressure(p, hi);
  if (!(pressure_gpa <= p_max && pressure_gpa >= p_min))
    throw std::domain_error(
        "pressure " + std::to_string(pressure_gpa) +
        " GPa outside the invertible bracket [" + std::to_string(p_min) +
        ", " + std::to_string(p_max) + "]");

  // P(V) is strictly decreasing on the bracket for physical parameters.
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bm3_pressure(p, mid) >= pressure_gpa)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dimerstate::eos
