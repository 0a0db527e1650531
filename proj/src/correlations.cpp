#include "dimerstate/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "dimerstate/dimer.hpp"

namespace dimerstate::corr {

namespace {

using detail::xlog2;

void require_c(double c) {
  if (!(c >= -1.0 && c <= 1.0 / 3.0))
    throw std::domain_error("correlation c must lie in [-1, 1/3]");
}

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 matmul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (int j = 0; j < 4; ++j) r[i][j] += aik * b[k][j];
    }
  return r;
}

/// Jacobi diagonalization of a symmetric 4x4. Returns eigenvalues in `w`;
/// accumulates eigenvectors (columns) into `v` when given.
void jacobi_eigen(Mat4 a, std::array<double, 4>& w, Mat4* v) {
  if (v) {
    *v = Mat4{};
    for (int i = 0; i < 4; ++i) (*v)[i][i] = 1.0;
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a[p][q] * a[p][q];
    if (off < eps * eps) break;

    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double apq = a[p][q];
        if (std::fabs(apq) < 1e-300) continue;

        const double theta = 0.5 * (a[q][q] - a[p][p]) / apq;
        double t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double cth = 1.0 / std::sqrt(1.0 + t * t);
        const double sth = t * cth;
        const double tau = sth / (1.0 + cth);

        const double delta = t * apq;
        a[p][p] -= delta;
        a[q][q] += delta;
        a[p][q] = a[q][p] = 0.0;
        for (int r = 0; r < 4; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r][p];
          const double arq = a[r][q];
          a[r][p] = a[p][r] = arp - sth * (arq + tau * arp);
          a[r][q] = a[q][r] = arq + sth * (arp - tau * arq);
        }
        if (v) {
          for (int r = 0; r < 4; ++r) {
            const double vrp = (*v)[r][p];
            const double vrq = (*v)[r][q];
            (*v)[r][p] = vrp - sth * (vrq + tau * vrp);
            (*v)[r][q] = vrq + sth * (vrp - tau * vrq);
          }
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) w[i] = a[i][i];
}

/// Density matrix of the isotropic Bell-diagonal state in the product basis
/// |ab> -> 2a + b. Real symmetric: every Pauli tensor involved is real.
Mat4 density_matrix(double c) {
  Mat4 rho{};
  const double d = 0.25;
  // diag: 1 + c*szsz  -> szsz = +1 on |00>,|11>, -1 on |01>,|10>
  rho[0][0] = rho[3][3] = d * (1.0 + c);
  rho[1][1] = rho[2][2] = d * (1.0 - c);
  // sxsx + sysy flips |01><10| pairs with weight 2c; sxsx alone couples
  // |00><11| with c while sysy contributes -c there.
  rho[1][2] = rho[2][1] = d * 2.0 * c;
  return rho;
}

double entropy_bits(const std::array<double, 4>& w) {
  double s = 0.0;
  for (double x : w) s -= xlog2(x);  // xlog2 treats x < 1e-300 (and <0) as 0
  return s;
}

/// Binary entropy (bits) of the eigenvalues of a Hermitian 2x2 with trace
/// `tr` and determinant `det`.
double entropy2_bits(double tr, double det) {
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return -xlog2(0.5 * (tr + disc)) - xlog2(0.5 * (tr - disc));
}

/// Classical correlation extracted by measuring qubit B along the Bloch
/// direction (theta, phi): S(rho_A) - sum_k p_k S(rho_A given outcome k).
double measured_classical_correlation(const Mat4& rho, double s_a,
                                      double theta, double phi) {
  using cd = std::complex<double>;
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  const cd eip = std::polar(1.0, phi);
  // Orthonormal measurement vectors on B.
  const std::array<std::array<cd, 2>, 2> vecs = {{
      {cd(ch), eip * sh},
      {cd(sh), -eip * ch},
  }};

  double conditional = 0.0;
  for (const auto& v : vecs) {
    // M_{a a'} = sum_{b b'} conj(v_b) rho[2a+b][2a'+b'] v_{b'}
    cd m00(0.0), m01(0.0), m11(0.0);
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp) {
        const cd w = std::conj(v[b]) * v[bp];
        m00 += w * rho[b][bp];
        m01 += w * rho[b][2 + bp];
        m11 += w * rho[2 + b][2 + bp];
      }
    const double p = m00.real() + m11.real();
    if (p < 1e-15) continue;
    const double det = m00.real() * m11.real() - std::norm(m01);
    conditional += p * entropy2_bits(1.0, det / (p * p));
  }
  return s_a - conditional;
}

/// Golden-section maximization of f on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double* best_arg) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  if (best_arg) *best_arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

}  // namespace

double mutual_information(double c) {
  require_c(c);
  return detail::mutual_information_raw(c);
}

double classical_correlation(double c) {
  require_c(c);
  return detail::classical_correlation_raw(c);
}

double quantum_discord(double c) {
  require_c(c);
  return detail::mutual_information_raw(c) -
         detail::classical_correlation_raw(c);
}

double concurrence(double c) {
  require_c(c);
  return detail::concurrence_raw(c);
}

double entanglement_of_formation(double concurrence_value) {
  if (!(concurrence_value >= 0.0 && concurrence_value <= 1.0))
    throw std::domain_error("concurrence must lie in [0, 1]");
  return detail::eof_from_concurrence_raw(concurrence_value);
}

double entanglement_temperature(double j_kelvin) {
  if (!std::isfinite(j_kelvin))
    throw std::domain_error("J must be finite");
  return j_kelvin < 0.0 ? -j_kelvin / std::log(3.0) : 0.0;
}

CorrelationPoint correlation_point(double j_kelvin, double temperature_k) {
  if (!(temperature_k > 0.0))
    throw std::domain_error("temperature must be positive");

  CorrelationPoint pt;
  pt.temperature_k = temperature_k;
  pt.c = dimer::detail::correlation_closed_form(j_kelvin, temperature_k);
  pt.reduced_susceptibility = pt.c + 1.0;
  pt.mutual_information = detail::mutual_information_raw(pt.c);
  pt.classical_correlation = detail::classical_correlation_raw(pt.c);
  pt.discord = pt.mutual_information - pt.classical_correlation;
  pt.concurrence = detail::concurrence_raw(pt.c);
  pt.eof = detail::eof_from_concurrence_raw(pt.concurrence);
  return pt;
}

double discord_oracle(const BellDiagonalState& state) {
  const Mat4 rho = density_matrix(state.c);

  std::array<double, 4> w;
  jacobi_eigen(rho, w, nullptr);
  const double s_ab = entropy_bits(w);

  // Reduced states: tr_B rho and tr_A rho, both 2x2 real here.
  const double a00 = rho[0][0] + rho[1][1];
  const double a11 = rho[2][2] + rho[3][3];
  const double a01 = rho[0][2] + rho[1][3];
  const double s_a = entropy2_bits(a00 + a11, a00 * a11 - a01 * a01);
  const double b00 = rho[0][0] + rho[2][2];
  const double b11 = rho[1][1] + rho[3][3];
  const double b01 = rho[0][1] + rho[2][3];
  const double s_b = entropy2_bits(b00 + b11, b00 * b11 - b01 * b01);

  const double mutual = s_a + s_b - s_ab;

  // Coarse deterministic grid over the measurement sphere.
  constexpr int n_theta = 64;
  constexpr int n_phi = 128;
  const double pi = std::acos(-1.0);
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      const double val = measured_classical_correlation(rho, s_a, theta, phi);
      if (val > best) {
        best = val;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // Coordinate golden-section refinement around the grid winner.
  double dt = pi / (n_theta - 1);
  double dp = 2.0 * pi / n_phi;
  for (int round = 0; round < 8; ++round) {
    const double prev = best;
    best = golden_max(
        [&](double th) {
          return measured_classical_correlation(rho, s_a, th, best_phi);
        },
        best_theta - dt, best_theta + dt, &best_theta);
    best = golden_max(
        [&](double ph) {
          return measured_classical_correlation(rho, s_a, best_theta, ph);
        },
        best_phi - dp, best_phi + dp, &best_phi);
    if (std::fabs(best - prev) < 1e-10) break;
    dt *= 0.5;
    dp *= 0.5;
  }

  return mutual - best;
}

double concurrence_wootters_oracle(const BellDiagonalState& state) {
  const Mat4 rho = density_matrix(state.c);

  // sqrt(rho) through the spectral decomposition.
  std::array<double, 4> w;
  Mat4 vecs;
  jacobi_eigen(rho, w, &vecs);
  Mat4 sqrt_rho{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        s += vecs[i][k] * std::sqrt(std::max(0.0, w[k])) * vecs[j][k];
      sqrt_rho[i][j] = s;
    }

  // Spin-flipped state: Y rho Y with Y = sy x sy (real, antidiagonal +-1);
  // rho is real so conjugation is a no-op.
  constexpr int perm[4] = {3, 2, 1, 0};
  constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
  Mat4 flipped{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      flipped[i][j] = sign[i] * sign[j] * rho[perm[i]][perm[j]];

  // Eigenvalues of rho * flipped equal those of the symmetric product
  // sqrt(rho) flipped sqrt(rho).
  const Mat4 m = matmul(matmul(sqrt_rho, flipped), sqrt_rho);
  std::array<double, 4> mu;
  jacobi_eigen(m, mu, nullptr);
  std::sort(mu.begin(), mu.end(), std::greater<>());

  // The product is positive semidefinite; eigenvalues below the roundoff
  // floor are numerical zeros and would otherwise surface as sqrt(eps).
  const double floor = std::max(mu[0], 0.0) * 1e-13;
  for (auto& value : mu) value = value > floor ? value : 0.0;

  double conc = std::sqrt(mu[0]);
  for (int i = 1; i < 4; ++i) conc -= std::sqrt(mu[i]);
  return std::max(0.0, conc);
}

}  // namespace dimerstate::corr
