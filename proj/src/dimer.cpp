#include "spinent/dimer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinent::dimer {

DimerParams DimerParams::from_beta(double j1, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  DimerParams p;
  p.j1 = j1;
  p.temperature = std::isinf(beta) ? 0.0 : 1.0 / (kBoltzmannMeVPerK * beta);
  p.validate();
  return p;
}

void DimerParams::validate() const {
  if (!(j1 > 0.0) || !std::isfinite(j1)) throw std::invalid_argument("dimer j1 must be positive");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::invalid_argument("dimer temperature must be finite and >= 0");
}

double DimerParams::coupling_ratio() const {
  validate();
  if (temperature == 0.0) return std::numeric_limits<double>::infinity();
  return j1 / (kBoltzmannMeVPerK * temperature);
}

double population_difference(const DimerParams& p) {
  const double u = p.coupling_ratio();
  if (std::isinf(u)) return 1.0;
  const double x = std::exp(-u);
  return -std::expm1(-u) / (1.0 + 3.0 * x);
}

double dimer_correlation(const DimerParams& p) { return -0.75 * population_difference(p); }

double dimer_concurrence(const DimerParams& p) {
  const double u = p.coupling_ratio();
  if (std::isinf(u)) return 1.0;
  const double x = std::exp(-u);
  return std::max(0.0, (1.0 - 3.0 * x) / (1.0 + 3.0 * x));
}

double critical_temperature_theory(double j1) {
  if (!(j1 > 0.0)) throw std::invalid_argument("j1 must be positive");
  return j1 / (kBoltzmannMeVPerK * std::log(3.0));
}

double dimer_susceptibility_reduced(const DimerParams& p) {
  const double u = p.coupling_ratio();
  if (std::isinf(u)) return 0.0;
  const double x = std::exp(-u);
  // (1 - dn)/4 = x / (1 + 3x), without the cancellation of 1 - dn
  return x / (1.0 + 3.0 * x);
}

double dimer_susceptibility(const DimerParams& p) {
  if (p.temperature == 0.0) return 0.0;
  return dimer_susceptibility_reduced(p) / (kBoltzmannMeVPerK * p.temperature);
}

double susceptibility_peak_temperature(double j1) {
  if (!(j1 > 0.0)) throw std::invalid_argument("j1 must be positive");
  const double scale = j1 / kBoltzmannMeVPerK;
  auto chi = [j1](double t) { return dimer_susceptibility({j1, t}); };
  // peak lies well inside (0.1, 2) * j1/k_B
  double lo = 0.1 * scale;
  double hi = 2.0 * scale;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = chi(a);
  double fb = chi(b);
  while (hi - lo > 1e-12 * scale) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = chi(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = chi(b);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace spinent::dimer
