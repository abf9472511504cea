#include "doctest.h"
#include "oracles.hpp"

#include "spinent/dimer.hpp"
#include "spinent/pairent.hpp"
#include "spinent/thermal.hpp"

#include <random>

using namespace spinent;

namespace {

using C = std::complex<double>;

// uniform in the Bloch ball
Eigen::Vector3d random_bloch(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
  return v.normalized() * std::cbrt(unit(rng));
}

Eigen::MatrixXcd qubit(const Eigen::Vector3d& r) {
  return 0.5 * Eigen::Matrix2cd::Identity() + r.x() * oracle::pauli_half('x') + r.y() * oracle::pauli_half('y') +
         r.z() * oracle::pauli_half('z');
}

double correlation_sum(const Eigen::Matrix4cd& rho) {
  double sum = 0.0;
  for (char a : {'x', 'y', 'z'}) sum += (rho * oracle::kron(oracle::pauli_half(a), oracle::pauli_half(a))).trace().real();
  return sum;
}

}  // namespace

TEST_CASE("wootters concurrence examples") {
  CHECK(wootters_concurrence(oracle::singlet_projector()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wootters_concurrence(0.25 * Eigen::Matrix4cd::Identity()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(wootters_concurrence(oracle::werner(1.0 / 3.0))) < 1e-14);
  // Werner concurrence is (3p - 1)/2 above the threshold
  for (double p : {0.2, 0.4, 0.6, 0.9}) {
    const double direct = oracle::concurrence_direct(oracle::werner(p));
    CHECK(wootters_concurrence(oracle::werner(p)) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(direct == doctest::Approx(std::max(0.0, 1.5 * p - 0.5)).epsilon(1e-10));
  }
  // product of pure states
  const Eigen::Matrix4cd prod = oracle::kron(qubit({0, 0, 0.5}), qubit({0.5, 0, 0}));
  CHECK(std::abs(wootters_concurrence(prod)) < 1e-12);
}

TEST_CASE("wootters concurrence agrees with the direct eigenvalue route on random states") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = C(g(rng), g(rng));
    Eigen::Matrix4cd rho = m * m.adjoint();
    rho /= rho.trace().real();
    CHECK(wootters_concurrence(rho) == doctest::Approx(oracle::concurrence_direct(rho)).epsilon(1e-8));
  }
}

TEST_CASE("invalid pair states are rejected") {
  Eigen::Matrix4cd not_hermitian = 0.25 * Eigen::Matrix4cd::Identity();
  not_hermitian(0, 1) = 0.1;
  CHECK_THROWS_AS(wootters_concurrence(not_hermitian), std::invalid_argument);
  CHECK_THROWS_AS(wootters_concurrence(0.5 * Eigen::Matrix4cd::Identity()), std::invalid_argument);
  Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  CHECK_THROWS_AS(wootters_concurrence(negative), std::invalid_argument);
}

TEST_CASE("isotropic concurrence") {
  CHECK(isotropic_concurrence(-0.75) == 1.0);
  CHECK(isotropic_concurrence(-0.25) == 0.0);
  CHECK(isotropic_concurrence(-0.5) == 0.5);
  CHECK(isotropic_concurrence(0.6) == 0.0);
  // Werner state with corr -0.5 has p = 2/3
  const Eigen::Matrix4cd w = oracle::werner(2.0 / 3.0);
  CHECK(correlation_sum(w) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(wootters_concurrence(w) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(isotropic_concurrence(-0.8), std::invalid_argument);
}

TEST_CASE("wootters equals isotropic concurrence on chain thermal states") {
  for (int n : {2, 4, 6, 8}) {
    const SpectralDecomposition d = diagonalize({n, 0.44, n == 2 ? 0.0 : 0.11, Boundary::periodic});
    for (int i = 0; i < 20; ++i) {
      const double t = 0.1 * std::pow(200.0, i / 19.0);
      const ThermalEnsemble ens(d, t);
      for (int a = 0; a < n; ++a) {
        const int b = (a + 1) % n;
        if (n == 2 && a == 1) break;
        const double c = pair_correlators(ens, a, b).sum();
        CHECK(std::abs(wootters_concurrence(reduced_pair_state(ens, a, b)) - isotropic_concurrence(c)) < 1e-10);
      }
    }
  }
}

TEST_CASE("chsh parameter") {
  CHECK(chsh_parameter(-0.75) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(chsh_parameter(0.0) == 0.0);
  CHECK(chsh_parameter(0.3) == chsh_parameter(-0.3));
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double b = chsh_parameter(-0.75 * i / 100.0);
    CHECK(b > prev);
    CHECK(b <= 2.0 * std::sqrt(2.0));
    if (i < 100) CHECK(b < 2.0 * std::sqrt(2.0));
    prev = b;
  }
  const double threshold = 3.0 / (4.0 * std::sqrt(2.0));
  CHECK(chsh_parameter(-threshold) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chsh_parameter(-threshold - 1e-9) > 2.0);
  CHECK_THROWS_AS(chsh_parameter(0.76), std::invalid_argument);

  // dimer violation ends near 2.16 K, well below the entanglement threshold
  const double t_chsh = oracle::bisect(
      [](double t) { return chsh_parameter(dimer::dimer_correlation({0.44, t})) - 2.0; }, 0.5, 10.0);
  CHECK(t_chsh == doctest::Approx(2.158).epsilon(2e-3));
  CHECK(t_chsh < dimer::critical_temperature_theory(0.44) - 2.0);
}

TEST_CASE("separable states obey the correlation bound") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Eigen::Matrix4cd rho = oracle::kron(qubit(random_bloch(rng)), qubit(random_bloch(rng)));
    worst = std::max(worst, std::abs(correlation_sum(rho)));
  }
  CHECK(worst <= 0.25 + 1e-12);

  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> unit;
  worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const int k = count(rng);
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      const double w = unit(rng);
      rho += w * oracle::kron(qubit(random_bloch(rng)), qubit(random_bloch(rng)));
      total += w;
    }
    rho /= total;
    worst = std::max(worst, std::abs(correlation_sum(rho)));
    CHECK_FALSE(correlation_witness(correlation_sum(rho), 1.0).entangled);
  }
  CHECK(worst <= 0.25 + 1e-12);

  // entangled dimer states below the critical temperature violate it
  for (double t : {0.5, 2.0, 4.0}) CHECK(correlation_witness(dimer::dimer_correlation({0.44, t}), t).entangled);
}

TEST_CASE("correlation witness") {
  const WitnessReport at = correlation_witness(-0.25, 4.0);
  CHECK(at.margin == 0.0);
  CHECK_FALSE(at.entangled);
  const WitnessReport strong = correlation_witness(-0.30, 1.0);
  CHECK(strong.entangled);
  CHECK(strong.margin == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(strong.separable_bound == 0.25);
  CHECK(strong.kind == WitnessKind::correlation);
  CHECK(strong.temperature == 1.0);
  CHECK(correlation_witness(0.3, 1.0).entangled);

  CHECK_THROWS_AS(correlation_witness(-0.9, 0.3), std::invalid_argument);
  const ClampedCorrelation clamped = clamp_physical_correlation(-0.9);
  CHECK(clamped.clamped);
  CHECK(clamped.value == -0.75);
  CHECK(clamped.warning.find("WARNING") != std::string::npos);
  CHECK(correlation_witness(clamped.value, 0.3).entangled);
  CHECK_FALSE(clamp_physical_correlation(-0.5).clamped);
}

TEST_CASE("susceptibility witness") {
  CHECK_FALSE(susceptibility_witness(0.25, 10.0).entangled);
  const WitnessReport at = susceptibility_witness(1.0 / 6.0, 4.6);
  CHECK(at.margin == 0.0);
  CHECK_FALSE(at.entangled);
  CHECK(at.kind == WitnessKind::susceptibility);

  const dimer::DimerParams p{0.44, 3.0};
  CHECK(p.coupling_ratio() == doctest::Approx(1.701).epsilon(1e-3));
  CHECK(dimer::population_difference(p) == doctest::Approx(0.528574).epsilon(1e-5));
  const double chi = dimer::dimer_susceptibility_reduced(p);
  CHECK(chi == doctest::Approx(0.117857).epsilon(1e-5));
  CHECK(susceptibility_witness(chi, 3.0).entangled);
  CHECK_THROWS_AS(susceptibility_witness(-0.01, 1.0), std::invalid_argument);
}

TEST_CASE("approximate susceptibility") {
  CHECK(approx_susceptibility_reduced(0.0) == 0.25);
  CHECK(approx_susceptibility_reduced(-0.75) == 0.0);
  CHECK(approx_susceptibility_reduced(0.75) == 0.5);
  // exact for uncoupled dimers
  for (double t : {0.5, 2.0, 6.0})
    CHECK(approx_susceptibility_reduced(dimer::dimer_correlation({0.44, t})) ==
          doctest::Approx(dimer::dimer_susceptibility_reduced({0.44, t})).epsilon(1e-12));
}

TEST_CASE("crossing temperature") {
  std::vector<double> temps;
  std::vector<double> corr;
  std::vector<double> chi;
  for (int i = 0; i < 400; ++i) {
    const double t = 0.5 + 0.025 * i;
    temps.push_back(t);
    corr.push_back(std::abs(dimer::dimer_correlation({0.44, t})));
    chi.push_back(dimer::dimer_susceptibility_reduced({0.44, t}));
  }
  const auto t_corr = crossing_temperature(temps, corr, 0.25);
  REQUIRE(t_corr);
  CHECK(std::abs(*t_corr - 4.65) < 0.01);

  auto model_corr = [](double t) { return std::abs(dimer::dimer_correlation({0.44, t})); };
  auto model_chi = [](double t) { return dimer::dimer_susceptibility_reduced({0.44, t}); };
  const auto refined_corr = crossing_temperature(temps, corr, 0.25, model_corr);
  const auto refined_chi = crossing_temperature(temps, chi, 1.0 / 6.0, model_chi);
  REQUIRE(refined_corr);
  REQUIRE(refined_chi);
  CHECK(std::abs(*refined_corr - *refined_chi) < 1e-6);
  CHECK(std::abs(*refined_corr - dimer::critical_temperature_theory(0.44)) < 1e-9);

  const std::vector<double> mono{0.1, 0.2, 0.3};
  const std::vector<double> mono_t{1.0, 2.0, 3.0};
  CHECK_FALSE(crossing_temperature(mono_t, mono, 0.5).has_value());

  const std::vector<double> bad_t{1.0, 1.0, 2.0};
  CHECK_THROWS_AS(crossing_temperature(bad_t, mono, 0.5), std::invalid_argument);

  // first crossing from the cold side
  const std::vector<double> wiggle{0.0, 1.0, 0.0, 1.0};
  const std::vector<double> wiggle_t{1.0, 2.0, 3.0, 4.0};
  CHECK(*crossing_temperature(wiggle_t, wiggle, 0.5) == doctest::Approx(1.5));
  const std::vector<double> bounds(4, 0.5);
  CHECK(count_crossings(wiggle, bounds) == 3);
}

TEST_CASE("witnesses flip together for uncoupled dimers") {
  const SpectralDecomposition d = diagonalize({8, 0.44, 0.0, Boundary::periodic});
  auto corr = [&](double t) { return std::abs(pair_correlators(ThermalEnsemble(d, t), 0, 1).sum()); };
  auto chi = [&](double t) { return exact_susceptibility_reduced(ThermalEnsemble(d, t)); };
  const double t1 = bisect([&](double t) { return corr(t) - 0.25; }, 2.0, 8.0);
  const double t2 = bisect([&](double t) { return chi(t) - 1.0 / 6.0; }, 2.0, 8.0);
  CHECK(std::abs(t1 - t2) < 1e-6);
}
