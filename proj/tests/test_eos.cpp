#include "dimerstate/eos.hpp"

#include <cmath>
#include <random>

#include "dimerstate/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace dimerstate;
using eos::EosParams;
using testsup::reference_eos;

TEST_CASE("energy at the equilibrium volume is E0") {
  const EosParams p = reference_eos();
  CHECK(eos::bm3_energy(p, p.v0_bohr3) == doctest::Approx(0.0).epsilon(1e-15));

  EosParams shifted = p;
  shifted.e0_hartree = -1234.5;
  CHECK(eos::bm3_energy(shifted, p.v0_bohr3) == doctest::Approx(-1234.5));
  CHECK_THROWS_AS(eos::bm3_energy(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(eos::bm3_energy(p, -5.0), std::domain_error);
}

TEST_CASE("energy at 0.9 V0 matches the independently evaluated fixture") {
  // Frozen from a scripted evaluation of the closed form with the same
  // conversion constants.
  CHECK(eos::bm3_energy(reference_eos(), 0.9 * 3271.0) ==
        doctest::Approx(0.034916084220158127).epsilon(1e-12));
}

TEST_CASE("energy is convex about the minimum for positive B0'") {
  const EosParams p = reference_eos();
  for (double f = 0.7; f <= 1.3; f += 0.025) {
    if (std::fabs(f - 1.0) < 1e-9) continue;
    CHECK(eos::bm3_energy(p, f * p.v0_bohr3) > p.e0_hartree);
  }
}

TEST_CASE("pressure: P(V0) = 0, fixture value, and monotone decrease") {
  const EosParams p = reference_eos();
  CHECK(eos::bm3_pressure(p, p.v0_bohr3) == 0.0);
  CHECK(eos::bm3_pressure(p, 0.95 * p.v0_bohr3) ==
        doctest::Approx(3.0187483307977088).epsilon(1e-12));
  double prev = eos::bm3_pressure(p, 0.7 * p.v0_bohr3);
  for (double f = 0.705; f <= 1.2; f += 0.005) {
    const double now = eos::bm3_pressure(p, f * p.v0_bohr3);
    CHECK(now < prev);
    prev = now;
  }
  CHECK_THROWS_AS(eos::bm3_pressure(p, -1.0), std::domain_error);
}

TEST_CASE("analytic pressure equals -dE/dV by central differences") {
  const EosParams p = reference_eos();
  const double h = 1e-4 * p.v0_bohr3;
  for (double f = 0.8; f <= 1.15; f += 0.007) {
    const double v = f * p.v0_bohr3;
    const double fd = -(eos::bm3_energy(p, v + h) - eos::bm3_energy(p, v - h)) /
                      (2.0 * h) * constants::hartree_per_bohr3_in_gpa;
    const double analytic = eos::bm3_pressure(p, v);
    if (std::fabs(analytic) > 1e-3)
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("bulk modulus identity -V dP/dV at V0") {
  const EosParams p = reference_eos();
  const double h = 1e-5 * p.v0_bohr3;
  const double dpdv = (eos::bm3_pressure(p, p.v0_bohr3 + h) -
                       eos::bm3_pressure(p, p.v0_bohr3 - h)) /
                      (2.0 * h);
  CHECK(-p.v0_bohr3 * dpdv == doctest::Approx(p.b0_gpa).epsilon(1e-6));
}

TEST_CASE("noiseless round-trip fit recovers the parameters to 1e-8") {
  EosParams truth = reference_eos();
  truth.e0_hartree = -1234.5;
  const auto series = testsup::synthetic_series(truth);
  const auto report = eos::fit_bm3(series);
  REQUIRE(report.converged);
  CHECK(report.params.v0_bohr3 ==
        doctest::Approx(truth.v0_bohr3).epsilon(1e-8));
  CHECK(report.params.b0_gpa == doctest::Approx(truth.b0_gpa).epsilon(1e-8));
  CHECK(report.params.b0_prime ==
        doctest::Approx(truth.b0_prime).epsilon(1e-8));
  CHECK(report.params.e0_hartree ==
        doctest::Approx(truth.e0_hartree).epsilon(1e-12));
  CHECK(report.rms_residual_hartree < 1e-10);
}

TEST_CASE("seeded-noise fit stays within the frozen tolerance budget") {
  EosParams truth = reference_eos();
  truth.e0_hartree = -1234.5;
  auto series = testsup::synthetic_series(truth);
  REQUIRE(series.samples.size() == testsup::kSeededNoiseHa.size());
  for (std::size_t i = 0; i < series.samples.size(); ++i)
    series.samples[i].energy_hartree += testsup::kSeededNoiseHa[i];

  const auto report = eos::fit_bm3(series);
  REQUIRE(report.converged);
  CHECK(std::fabs(report.params.v0_bohr3 - truth.v0_bohr3) / truth.v0_bohr3 <
        1e-3);
  CHECK(std::fabs(report.params.b0_gpa - truth.b0_gpa) / truth.b0_gpa < 1e-2);
  CHECK(std::fabs(report.params.b0_prime - truth.b0_prime) / truth.b0_prime <
        5e-2);
}

TEST_CASE("fit rejects underdetermined and degenerate input") {
  EosParams truth = reference_eos();
  auto series = testsup::synthetic_series(truth, 0.9, 1.1, 4);
  CHECK_THROWS_AS(eos::fit_bm3(series), InputError);

  eos::EnergyVolumeSeries flat;
  for (int i = 0; i < 6; ++i)
    flat.samples.push_back({3000.0 + 10.0 * i, -10.0});  // collinear energies
  CHECK_THROWS_AS(eos::fit_bm3(flat), InputError);

  eos::EnergyVolumeSeries dup = testsup::synthetic_series(truth);
  dup.samples[3].volume_bohr3 = dup.samples[2].volume_bohr3;
  CHECK_THROWS_AS(eos::fit_bm3(dup), InputError);

  eos::EnergyVolumeSeries negative = testsup::synthetic_series(truth);
  negative.samples[0].volume_bohr3 = -negative.samples[0].volume_bohr3;
  CHECK_THROWS_AS(eos::fit_bm3(negative), InputError);
}

TEST_CASE("non-convergence is reported, not thrown") {
  EosParams truth = reference_eos();
  const auto series = testsup::synthetic_series(truth);
  eos::FitOptions opts;
  opts.max_iterations = 1;
  EosParams far_init{.e0_hartree = 5.0, .v0_bohr3 = 5000.0, .b0_gpa = 400.0,
                     .b0_prime = 9.0};
  const auto report = eos::fit_bm3(series, far_init, opts);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations <= 1);
  CHECK(std::isfinite(report.rms_residual_hartree));
}

TEST_CASE("fit is idempotent on its own model") {
  const auto first = eos::fit_bm3(testsup::synthetic_series(reference_eos()));
  REQUIRE(first.converged);
  const auto regenerated = testsup::synthetic_series(first.params);
  const auto second = eos::fit_bm3(regenerated);
  REQUIRE(second.converged);
  CHECK(second.params.v0_bohr3 ==
        doctest::Approx(first.params.v0_bohr3).epsilon(1e-10));
  CHECK(second.params.b0_gpa ==
        doctest::Approx(first.params.b0_gpa).epsilon(1e-10));
  CHECK(second.params.b0_prime ==
        doctest::Approx(first.params.b0_prime).epsilon(1e-10));
}

TEST_CASE("fit is invariant under a constant energy offset") {
  auto series = testsup::synthetic_series(reference_eos());
  const auto base = eos::fit_bm3(series);
  for (auto& s : series.samples) s.energy_hartree += 7.25;
  const auto shifted = eos::fit_bm3(series);
  REQUIRE(base.converged);
  REQUIRE(shifted.converged);
  CHECK(shifted.params.e0_hartree ==
        doctest::Approx(base.params.e0_hartree + 7.25).epsilon(1e-10));
  CHECK(shifted.params.v0_bohr3 ==
        doctest::Approx(base.params.v0_bohr3).epsilon(1e-10));
  CHECK(shifted.params.b0_gpa ==
        doctest::Approx(base.params.b0_gpa).epsilon(1e-10));
  CHECK(shifted.params.b0_prime ==
        doctest::Approx(base.params.b0_prime).epsilon(1e-10));
}

TEST_CASE("pressure inversion") {
  const EosParams p = reference_eos();
  SUBCASE("P = 0 returns V0") {
    CHECK(eos::invert_pressure(p, 0.0) ==
          doctest::Approx(p.v0_bohr3).epsilon(1e-10));
  }
  SUBCASE("round trip over sampled volumes") {
    for (int i = 0; i < 20; ++i) {
      const double v = (0.55 + 0.6 * i / 19.0) * p.v0_bohr3;
      const double back = eos::invert_pressure(p, eos::bm3_pressure(p, v));
      CHECK(back == doctest::Approx(v).epsilon(1e-9));
    }
  }
  SUBCASE("compression shrinks the cell") {
    CHECK(eos::invert_pressure(p, 5.0) < p.v0_bohr3);
  }
  SUBCASE("out-of-bracket pressure is a domain error") {
    const double p_max = eos::bm3_pressure(p, 0.5 * p.v0_bohr3);
    CHECK_THROWS_AS(eos::invert_pressure(p, p_max * 1.01), std::domain_error);
    const double p_min = eos::bm3_pressure(p, 1.2 * p.v0_bohr3);
    CHECK_THROWS_AS(eos::invert_pressure(p, p_min - 1.0), std::domain_error);
  }
}
