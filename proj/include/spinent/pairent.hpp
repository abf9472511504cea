#pragma once

#include "spinent/thermal.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace spinent {

enum class WitnessKind { correlation, susceptibility };
std::string to_string(WitnessKind kind);

/// Outcome of testing one observable against its separable-state bound.
/// margin > 0 exactly when the observable certifies entanglement.
struct WitnessReport {
  WitnessKind kind = WitnessKind::correlation;
  double value = 0.0;
  double separable_bound = 0.0;
  double margin = 0.0;
  bool entangled = false;
  double temperature = 0.0;
};

inline constexpr double kCorrelationBound = 0.25;
inline constexpr double kSusceptibilityBound = 1.0 / 6.0;
inline constexpr double kLocalRealisticBound = 2.0;

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square
/// roots of the eigenvalues of rho (sy x sy) rho* (sy x sy). Throws when rho is
/// not Hermitian, not unit trace, or has an eigenvalue below -1e-10.
double wootters_concurrence(const PairDensity& rho);

/// 2 max(0, -corr_sum - 1/4); valid for SU(2)-invariant pair states only.
double isotropic_concurrence(double corr_sum);

/// (8 sqrt 2 / 3) |corr_sum|, the optimal CHSH value of an isotropic pair.
double chsh_parameter(double corr_sum);

/// Correlation of a physical pair state lies in [-3/4, 3/4]. Values outside,
/// such as fitted correlations with large error bars, are clamped and flagged.
struct ClampedCorrelation {
  double value = 0.0;
  bool clamped = false;
  std::string warning;
};
ClampedCorrelation clamp_physical_correlation(double corr_sum);

/// Entangled iff |corr_sum| > 1/4. Throws for |corr_sum| > 3/4.
WitnessReport correlation_witness(double corr_sum, double temperature);

/// Entangled iff chi_reduced = kT chi / (g^2 mu_B^2 N) < 1/6.
WitnessReport susceptibility_witness(double chi_reduced, double temperature);

/// Nearest-neighbour estimate 1/4 + corr_sum / 3 of the reduced susceptibility.
double approx_susceptibility_reduced(double corr_sum);

/// Root of a continuous function on [lo, hi] where f(lo), f(hi) differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

/// Temperature of the first sign change of (value - bound) scanning up from
/// the lowest temperature. The root is found by linear interpolation between
/// the bracketing samples, or by bisection on `model` when one is given.
/// Returns nullopt when the curve never crosses the bound.
std::optional<double> crossing_temperature(
    std::span<const double> temperatures, std::span<const double> values, double bound,
    const std::function<double(double)>& model = {});

/// Number of sign changes of (value - bound) along the curve.
int count_crossings(std::span<const double> values, std::span<const double> bounds);

}  // namespace spinent
