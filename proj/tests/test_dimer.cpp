#include "dimerstate/dimer.hpp"

#include <cmath>
#include <random>

#include "dimerstate/constants.hpp"
#include "dimerstate/errors.hpp"
#include "doctest.h"

using namespace dimerstate;
using dimerstate::dimer::DimerModel;

namespace {

DimerModel model_with_j(double j) { return {j, 2.0, 1.0}; }

/// alpha = 2 k_B / (N (g mu_B)^2), the reduced-susceptibility normalizer.
double alpha(const DimerModel& m) {
  const double g_mu_b = m.g * constants::bohr_magneton_j_per_t;
  return 2.0 * constants::boltzmann_j_per_k / (m.n_dimers * g_mu_b * g_mu_b);
}

}  // namespace

TEST_CASE("energy levels split by exactly J") {
  const auto zero = dimer::energy_levels(model_with_j(0.0));
  CHECK(zero.singlet == 0.0);
  CHECK(zero.triplet == 0.0);

  const auto afm = dimer::energy_levels(model_with_j(-4.0));
  CHECK(afm.singlet == doctest::Approx(-3.0));
  CHECK(afm.triplet == doctest::Approx(1.0));
  CHECK(afm.singlet - afm.triplet == doctest::Approx(-4.0));

  const auto fm = dimer::energy_levels(model_with_j(4.0));
  CHECK(fm.singlet == doctest::Approx(3.0));
  CHECK(fm.triplet == doctest::Approx(-1.0));
  CHECK(fm.singlet > fm.triplet);  // separable ground state
}

TEST_CASE("thermal state limits") {
  SUBCASE("infinite temperature: uniform populations, c -> 0") {
    const auto st = dimer::thermal_state(model_with_j(-4.0), 1e9 * 4.0);
    for (double p : st.populations) CHECK(p == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::fabs(st.correlation) < 1e-8);
  }
  SUBCASE("antiferromagnetic low temperature: pure singlet, c -> -1") {
    const auto st = dimer::thermal_state(model_with_j(-4.0), 4.0 / 100.0);
    CHECK(st.populations[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(st.correlation == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("entanglement threshold: c = -1/3 at T = |J|/ln 3") {
    const double j = -10.0;
    const auto st = dimer::thermal_state(model_with_j(j), 10.0 / std::log(3.0));
    CHECK(st.correlation == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("rejects T <= 0") {
    CHECK_THROWS_AS(dimer::thermal_state(model_with_j(-4.0), 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(dimer::thermal_state(model_with_j(-4.0), -1.0),
                    std::domain_error);
  }
}

TEST_CASE("thermal state structural invariants") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jdist(-100.0, 100.0);
  std::uniform_real_distribution<double> tdist(0.01, 1000.0);
  for (int i = 0; i < 200; ++i) {
    const auto st = dimer::thermal_state(model_with_j(jdist(rng)), tdist(rng));
    double sum = 0.0;
    for (double p : st.populations) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(st.populations[1] == st.populations[2]);  // triplet isotropy
    CHECK(st.populations[2] == st.populations[3]);
    const double c_pop = st.populations[3] + st.populations[1] -
                         st.populations[2] - st.populations[0];
    CHECK(st.correlation == doctest::Approx(c_pop).epsilon(1e-14));
  }
}

TEST_CASE("reduced susceptibility values and range") {
  const auto m = model_with_j(-10.0);
  SUBCASE("x -> 1 at high temperature") {
    CHECK(dimer::reduced_susceptibility(m, 1e9) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("x -> 0 for the antiferromagnet at low temperature") {
    CHECK(dimer::reduced_susceptibility(m, 0.05) < 1e-10);
  }
  SUBCASE("x = 2/3 at the entanglement threshold") {
    CHECK(dimer::reduced_susceptibility(m, 10.0 / std::log(3.0)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("x stays in (0, 4/3) and matches alpha T chi") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> jdist(-100.0, 100.0);
    std::uniform_real_distribution<double> tdist(0.01, 1000.0);
    for (int i = 0; i < 100; ++i) {
      const DimerModel mm{jdist(rng), 2.0, 1.0};
      const double t = tdist(rng);
      const double x = dimer::reduced_susceptibility(mm, t);
      CHECK(x > 0.0);
      CHECK(x < 4.0 / 3.0);
      const double chi = dimer::susceptibility(mm, t);
      CHECK(alpha(mm) * t * chi == doctest::Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity of x in temperature") {
  // Start where e^{-J/T} is still resolvable from 0 so x has not saturated.
  for (double j : {-25.0, 40.0}) {
    const auto m = model_with_j(j);
    const double t0 = std::fabs(j) / 20.0;
    double prev = dimer::reduced_susceptibility(m, t0);
    for (double t = t0 + 1.0; t < 300.0; t += 2.37) {
      const double x = dimer::reduced_susceptibility(m, t);
      if (j < 0)
        CHECK(x > prev);  // antiferromagnet warms toward x = 1 from below
      else
        CHECK(x < prev);
      prev = x;
    }
  }
}

TEST_CASE("population and susceptibility routes to c agree") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> jdist(-100.0, 100.0);
  std::uniform_real_distribution<double> tdist(0.01, 1000.0);
  for (int i = 0; i < 100; ++i) {
    const DimerModel m{jdist(rng), 2.0, 1.0};
    const double t = tdist(rng);
    const double c_state = dimer::thermal_state(m, t).correlation;
    const double chi = dimer::susceptibility(m, t);
    const auto back =
        dimer::correlation_from_susceptibility(chi, t, m.g, m.n_dimers);
    CHECK(back.within_model);
    CHECK(back.c == doctest::Approx(c_state).epsilon(1e-12));
  }
}

TEST_CASE("correlation_from_susceptibility endpoints and rejection") {
  const DimerModel m = model_with_j(0.0);
  const double a = alpha(m);
  SUBCASE("x = 1 is uncorrelated") {
    const auto r = dimer::correlation_from_susceptibility(1.0 / a, 1.0, m.g,
                                                          m.n_dimers);
    CHECK(r.c == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("x = 0 is the singlet") {
    const auto r =
        dimer::correlation_from_susceptibility(0.0, 1.0, m.g, m.n_dimers);
    CHECK(r.c == doctest::Approx(-1.0));
    CHECK(r.within_model);
  }
  SUBCASE("x = 2/3 is the threshold") {
    const auto r = dimer::correlation_from_susceptibility(
        (2.0 / 3.0) / a, 1.0, m.g, m.n_dimers);
    CHECK(r.c == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("far out of range is rejected") {
    CHECK_THROWS_AS(dimer::correlation_from_susceptibility(10.0 / a, 1.0, m.g,
                                                           m.n_dimers),
                    InconsistentDataError);
  }
  SUBCASE("slightly out of range is flagged but clamped") {
    const double x_bad = 4.0 / 3.0 + 1e-7;  // inside the hard gate only
    const auto r = dimer::correlation_from_susceptibility(x_bad / a, 1.0, m.g,
                                                          m.n_dimers);
    CHECK_FALSE(r.within_model);
    CHECK(r.c == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("negative susceptibility is a domain error") {
    CHECK_THROWS_AS(
        dimer::correlation_from_susceptibility(-1.0, 1.0, m.g, m.n_dimers),
        std::domain_error);
  }
}
