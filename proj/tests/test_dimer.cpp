#include "doctest.h"
#include "oracles.hpp"

#include "spinent/dimer.hpp"
#include "spinent/pairent.hpp"
#include "spinent/thermal.hpp"

#include <cmath>

using namespace spinent;
using namespace spinent::dimer;

namespace {

const double kLn3 = std::log(3.0);

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return t;
}

}  // namespace

TEST_CASE("population difference") {
  CHECK(population_difference(DimerParams::from_beta(0.44, kLn3 / 0.44)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // beta j1 = 0.44 / (0.0861733 * 0.3) = 17.019966...
  const DimerParams cold{0.44, 0.3};
  CHECK(cold.coupling_ratio() == doctest::Approx(17.019966).epsilon(1e-7));
  const double u = cold.coupling_ratio();
  const double expected = (1 - std::exp(-u)) / (1 + 3 * std::exp(-u));
  CHECK(population_difference(cold) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(1.0 - population_difference(cold) == doctest::Approx(4 * std::exp(-u)).epsilon(1e-6));
  CHECK(1.0 - population_difference(cold) < 2e-7);
  CHECK(population_difference({0.44, 1e9}) < 1e-8);
  CHECK(population_difference({0.44, 0.0}) == 1.0);

  double prev = 2.0;
  for (double t : log_grid(0.05, 100.0, 60)) {
    const double dn = population_difference({0.44, t});
    CHECK(dn <= prev);
    prev = dn;
  }
}

TEST_CASE("dimer correlation") {
  CHECK(dimer_correlation({0.44, 0.0}) == -0.75);
  CHECK(dimer_correlation({0.44, 0.01}) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(dimer_correlation(DimerParams::from_beta(0.44, kLn3 / 0.44)) == doctest::Approx(-0.25).epsilon(1e-14));

  const SpectralDecomposition d = diagonalize({2, 0.44, 0.0, Boundary::periodic});
  for (double t : log_grid(0.1, 20.0, 50)) {
    const double ed = pair_correlators(ThermalEnsemble(d, t), 0, 1).sum();
    CHECK(std::abs(ed - dimer_correlation({0.44, t})) < 1e-12);
  }
}

TEST_CASE("dimer concurrence") {
  CHECK(dimer_concurrence({0.44, 0.0}) == 1.0);
  CHECK(dimer_concurrence({0.44, 0.05}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dimer_concurrence(DimerParams::from_beta(0.44, kLn3 / 0.44)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dimer_concurrence({0.44, 8.0}) == 0.0);
  const DimerParams p{0.44, 2.0};
  CHECK(dimer_concurrence(p) == doctest::Approx(2.0 * std::max(0.0, -dimer_correlation(p) - 0.25)).epsilon(1e-14));

  // against the Wootters concurrence of the two-spin thermal state
  const SpectralDecomposition d = diagonalize({2, 0.44, 0.0, Boundary::periodic});
  double prev = 2.0;
  for (double t : log_grid(0.1, 20.0, 50)) {
    const double c = dimer_concurrence({0.44, t});
    CHECK(std::abs(wootters_concurrence(reduced_pair_state(ThermalEnsemble(d, t), 0, 1)) - c) < 1e-10);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("theoretical critical temperature") {
  const double tc = critical_temperature_theory(0.44);
  CHECK(tc == doctest::Approx(4.6477).epsilon(1e-4));
  CHECK(std::abs(tc - 4.6) < 0.1);
  CHECK(critical_temperature_theory(0.88) == doctest::Approx(2.0 * tc).epsilon(1e-15));
  CHECK(std::abs(dimer_concurrence({0.44, tc})) < 1e-12);
  CHECK_THROWS_AS(critical_temperature_theory(0.0), std::invalid_argument);
}

TEST_CASE("dimer susceptibility") {
  const DimerParams at_tc = DimerParams::from_beta(0.44, kLn3 / 0.44);
  CHECK(dimer_susceptibility_reduced(at_tc) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(dimer_susceptibility_reduced({0.44, 1e8}) == doctest::Approx(0.25).epsilon(1e-8));
  for (double t : {0.2, 1.0, 5.0, 40.0})
    CHECK(dimer_susceptibility_reduced({0.44, t}) == doctest::Approx((1 - population_difference({0.44, t})) / 4).epsilon(1e-12));

  // peak: root of u = 1 + 3 e^{-u}
  const double u = oracle::bisect([](double x) { return x - 1.0 - 3.0 * std::exp(-x); }, 0.5, 3.0);
  CHECK(u == doctest::Approx(1.6035).epsilon(1e-4));
  const double t_peak = 0.44 / (kBoltzmannMeVPerK * u);
  CHECK(t_peak == doctest::Approx(3.184).epsilon(1e-3));
  CHECK(susceptibility_peak_temperature(0.44) == doctest::Approx(t_peak).epsilon(1e-7));
}

TEST_CASE("witness crossings coincide for the dimer") {
  const double tc = critical_temperature_theory(0.44);
  const double t_corr = oracle::bisect([](double t) { return std::abs(dimer_correlation({0.44, t})) - 0.25; }, 1.0, 10.0);
  const double t_chi = oracle::bisect([](double t) { return dimer_susceptibility_reduced({0.44, t}) - 1.0 / 6.0; }, 1.0, 10.0);
  CHECK(std::abs(t_corr - tc) < 1e-9);
  CHECK(std::abs(t_chi - tc) < 1e-9);
}

TEST_CASE("invalid dimer parameters") {
  CHECK_THROWS_AS(population_difference({-0.1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(population_difference({0.44, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DimerParams::from_beta(0.44, 0.0), std::invalid_argument);
}
