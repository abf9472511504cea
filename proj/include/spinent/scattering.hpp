#pragma once

#include "spinent/constants.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spinent::scattering {

/// Wave-vector transfer in reciprocal lattice units. Q . d for a vector d in
/// lattice units is 2 pi (h d_x + k d_y + l d_z).
struct WaveVector {
  double h = 0.0;
  double k = 0.0;
  double l = 0.0;

  double dot(const Eigen::Vector3d& d) const { return 2.0 * kPi * (h * d.x() + k * d.y() + l * d.z()); }
};

/// A spin-spin bond entering the first-moment sum rule. `slot` indexes the
/// correlation vector passed alongside the geometry.
struct BondVector {
  Eigen::Vector3d d;
  double coupling = 0.0;  // meV
  int slot = 0;
};

struct LatticeGeometry {
  std::vector<BondVector> bonds;
  /// Dimer centre-to-centre vectors; the couplings live in SmaParams::j_u.
  std::vector<Eigen::Vector3d> dimer_links;
  /// Centre-to-centre vector along the chain (defines q~ = Q . u0).
  Eigen::Vector3d chain_vector{0.5, 0.5, 0.5};
  /// Average every bond over its k -> -k mirror image, as for d1 = (0.252, +-0.027, 0.228).
  bool average_mirror = true;

  /// Copper nitrate: one intradimer bond (slot 0, coupling j1) and one link u0 = [111]/2.
  static LatticeGeometry copper_nitrate(double j1 = 0.44);
  void validate() const;
};

enum class SpectralShape { gaussian, delta };

struct SmaParams {
  double j1 = 0.44;                    // meV
  double renormalization = 1.0;        // n(T)
  double gamma0 = 0.02;                // meV, HWHM offset
  double gamma1 = 0.0;                 // meV
  std::vector<double> j_u{0.11};       // meV, aligned with LatticeGeometry::dimer_links
  SpectralShape shape = SpectralShape::gaussian;

  void validate(const LatticeGeometry& geometry) const;
};

/// hbar <omega>_Q = -(1/3) sum_d J_d <S_0 . S_d> (1 - cos Q.d), in meV.
double first_moment(const WaveVector& q, std::span<const double> correlators,
                    const LatticeGeometry& geometry);

/// epsilon(Q) = j1 - n (1/2) sum_u J_u cos Q.u, in meV.
double dispersion(const WaveVector& q, const SmaParams& params, const LatticeGeometry& geometry);

/// Linewidth Gamma(q~) = gamma0 + (gamma1 / 2) cos q~.
double linewidth(const WaveVector& q, const SmaParams& params, const LatticeGeometry& geometry);

/// Integrated weight of the single mode, (hbar<omega>_Q / eps) / (1 - e^{-beta eps}).
/// For the delta shape S(Q, omega) = weight * delta(hbar omega - eps).
double sma_mode_weight(const WaveVector& q, double temperature, const SmaParams& params,
                       std::span<const double> correlators, const LatticeGeometry& geometry);

/// S(Q, omega) for the Gaussian spectral function. Throws std::domain_error
/// where eps(Q) <= 0.
double sma_scattering(const WaveVector& q, double omega_mev, double temperature,
                      const SmaParams& params, std::span<const double> correlators,
                      const LatticeGeometry& geometry);

struct ScatteringRecord {
  WaveVector q;
  double omega = 0.0;  // meV
  double s = 0.0;
  double sigma = 1.0;
};

struct ScatteringDataset {
  std::vector<ScatteringRecord> records;
  double temperature = 0.0;  // K

  void validate() const;
};

/// Sampling grid and noise model for synthetic data. Each point gets
/// sigma = noise * (|S| + floor_fraction * max S) (noise = 0 uses unit
/// relative scale and adds no noise).
struct DatasetGrid {
  std::vector<WaveVector> q;
  std::vector<double> omega;
  double temperature = 0.31;
  double noise = 0.01;
  double floor_fraction = 0.01;
};

/// n_q wave vectors evenly spaced on the segment [from, to] times n_omega
/// energies evenly spaced on [omega_min, omega_max].
DatasetGrid line_grid(const WaveVector& from, const WaveVector& to, int n_q, double omega_min,
                      double omega_max, int n_omega);

ScatteringDataset generate_synthetic_dataset(const SmaParams& params,
                                             std::span<const double> correlators,
                                             const LatticeGeometry& geometry,
                                             const DatasetGrid& grid, std::uint64_t noise_seed);

/// Which parameters float in a fit. The intradimer correlation is slot 0.
struct FitSelection {
  bool corr = true;
  std::vector<std::size_t> j_u;
  bool gamma0 = false;
  bool gamma1 = false;
  bool renormalization = false;
};

struct FitOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;  // relative chi-square change
};

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd values;
  Eigen::VectorXd errors;
  Eigen::MatrixXd covariance;
  double corr = 0.0;
  double corr_error = 0.0;
  SmaParams params;
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  int iterations = 0;
  bool degenerate = false;
};

/// Weighted least-squares fit of the SMA model to a dataset. Damped
/// Gauss-Newton with step halving and a central-difference Jacobian.
/// Uncertainties come from (J^T W J)^{-1}; rank-deficient normal matrices set
/// `degenerate` and yield infinite errors along the null directions.
FitResult fit_intradimer_correlation(const ScatteringDataset& data, const SmaParams& params,
                                     std::span<const double> correlators,
                                     const LatticeGeometry& geometry, const FitSelection& free,
                                     const FitOptions& options = {});

/// CSV with header h,k,l,omega_mev,s_value,sigma. Leading '#' comment lines
/// are allowed; "# temperature_k=<value>" sets the dataset temperature.
void write_dataset_csv(std::ostream& out, const ScatteringDataset& data);
ScatteringDataset read_dataset_csv(std::istream& in);

}  // namespace spinent::scattering
