#include "spinent/pairent.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinent {

std::string to_string(WitnessKind kind) {
  return kind == WitnessKind::correlation ? "correlation" : "susceptibility";
}

namespace {

constexpr double kPhysicalCorrelation = 0.75;

void check_correlation_range(double corr_sum, const char* who) {
  if (!std::isfinite(corr_sum) || std::abs(corr_sum) > kPhysicalCorrelation + 1e-12) {
    std::ostringstream msg;
    msg << who << ": correlation " << corr_sum << " outside the physical range [-3/4, 3/4]";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double wootters_concurrence(const PairDensity& rho) {
  using Mat = Eigen::Matrix4cd;
  if (!rho.allFinite()) throw std::invalid_argument("pair state has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("pair state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw std::invalid_argument("pair state trace != 1");

  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const Eigen::Vector4d ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-10) throw std::invalid_argument("pair state is not positive semidefinite");

  // sigma_y x sigma_y in the {uu, ud, du, dd} basis
  Mat flip = Mat::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  // A = sqrt(rho) F sqrt(rho)^* satisfies A A^+ = sqrt(rho) tilde sqrt(rho), so
  // the lambdas are singular values of A. This avoids square roots of tiny
  // eigenvalues at low temperature.
  const Eigen::Vector4d sqrt_ev = ev.cwiseMax(0.0).cwiseSqrt();
  const Mat sqrt_rho = es.eigenvectors() * sqrt_ev.asDiagonal() * es.eigenvectors().adjoint();
  const Mat a = sqrt_rho * flip * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Mat> svd(a);

  std::array<double, 4> lambda{};
  for (int i = 0; i < 4; ++i) lambda[static_cast<std::size_t>(i)] = svd.singularValues()[i];
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double isotropic_concurrence(double corr_sum) {
  check_correlation_range(corr_sum, "isotropic_concurrence");
  return 2.0 * std::max(0.0, -corr_sum - 0.25);
}

double chsh_parameter(double corr_sum) {
  check_correlation_range(corr_sum, "chsh_parameter");
  return 8.0 * std::sqrt(2.0) / 3.0 * std::abs(corr_sum);
}

ClampedCorrelation clamp_physical_correlation(double corr_sum) {
  if (!std::isfinite(corr_sum)) throw std::invalid_argument("correlation must be finite");
  ClampedCorrelation out{corr_sum, false, {}};
  if (std::abs(corr_sum) > kPhysicalCorrelation) {
    out.value = std::copysign(kPhysicalCorrelation, corr_sum);
    out.clamped = true;
    std::ostringstream msg;
    msg << "WARNING: correlation " << corr_sum
        << " is outside the physical range [-3/4, 3/4]; clamped to " << out.value;
    out.warning = msg.str();
  }
  return out;
}

WitnessReport correlation_witness(double corr_sum, double temperature) {
  check_correlation_range(corr_sum, "correlation_witness");
  WitnessReport r;
  r.kind = WitnessKind::correlation;
  r.value = corr_sum;
  r.separable_bound = kCorrelationBound;
  r.margin = std::abs(corr_sum) - kCorrelationBound;
  r.entangled = r.margin > 0.0;
  r.temperature = temperature;
  return r;
}

WitnessReport susceptibility_witness(double chi_reduced, double temperature) {
  if (!(chi_reduced >= 0.0) || !std::isfinite(chi_reduced))
    throw std::invalid_argument("reduced susceptibility must be finite and non-negative");
  WitnessReport r;
  r.kind = WitnessKind::susceptibility;
  r.value = chi_reduced;
  r.separable_bound = kSusceptibilityBound;
  r.margin = kSusceptibilityBound - chi_reduced;
  r.entangled = r.margin > 0.0;
  r.temperature = temperature;
  return r;
}

double approx_susceptibility_reduced(double corr_sum) {
  check_correlation_range(corr_sum, "approx_susceptibility_reduced");
  return std::max(0.0, 0.25 + corr_sum / 3.0);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: interval does not bracket a root");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> crossing_temperature(std::span<const double> temperatures,
                                           std::span<const double> values, double bound,
                                           const std::function<double(double)>& model) {
  if (temperatures.size() != values.size())
    throw std::invalid_argument("crossing_temperature: size mismatch");
  for (std::size_t i = 1; i < temperatures.size(); ++i)
    if (!(temperatures[i] > temperatures[i - 1]))
      throw std::invalid_argument("crossing_temperature: temperatures must increase strictly");

  for (std::size_t i = 1; i < temperatures.size(); ++i) {
    const double d0 = values[i - 1] - bound;
    const double d1 = values[i] - bound;
    if (d0 == 0.0) return temperatures[i - 1];
    if ((d0 > 0.0) == (d1 > 0.0) && d1 != 0.0) continue;
    const double t0 = temperatures[i - 1];
    const double t1 = temperatures[i];
    if (model) return bisect([&](double t) { return model(t) - bound; }, t0, t1, 1e-12 * t1);
    return t0 + (t1 - t0) * d0 / (d0 - d1);
  }
  return std::nullopt;
}

int count_crossings(std::span<const double> values, std::span<const double> bounds) {
  if (values.size() != bounds.size()) throw std::invalid_argument("count_crossings: size mismatch");
  int count = 0;
  int last_sign = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - bounds[i];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

}  // namespace spinent
