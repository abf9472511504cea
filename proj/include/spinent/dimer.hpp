#pragma once

#include "spinent/constants.hpp"

namespace spinent::dimer {

// Closed forms for an isolated antiferromagnetic dimer (j2 = 0).

struct DimerParams {
  double j1 = 0.44;           // meV
  double temperature = 1.0;   // K; 0 is the ground-state limit

  static DimerParams from_beta(double j1, double beta);

  /// beta * j1, +inf at T = 0.
  double coupling_ratio() const;
  void validate() const;
};

/// Singlet minus triplet population, (1 - e^{-u}) / (1 + 3 e^{-u}) with u = beta j1.
double population_difference(const DimerParams& p);

/// <S_0 . S_1> = -(3/4) population_difference.
double dimer_correlation(const DimerParams& p);

/// max(0, (1 - 3 e^{-u}) / (1 + 3 e^{-u})).
double dimer_concurrence(const DimerParams& p);

/// j1 / (k_B ln 3): the temperature at which the concurrence vanishes.
double critical_temperature_theory(double j1);

/// k T chi / (g^2 mu_B^2 N) = (1 - population_difference) / 4.
double dimer_susceptibility_reduced(const DimerParams& p);

/// chi in units of g^2 mu_B^2 N / meV (reduced value times beta).
double dimer_susceptibility(const DimerParams& p);

/// Temperature of the susceptibility maximum, by golden-section search on
/// dimer_susceptibility.
double susceptibility_peak_temperature(double j1);

}  // namespace spinent::dimer
