#pragma once

#include "spinent/constants.hpp"
#include "spinent/spinchain.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace spinent {

/// Eigenpairs of one S^z sector. Columns of `vectors` are eigenvectors in the
/// sector's product basis, energies ascending.
struct SectorSpectrum {
  int two_sz = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
  // <n|M_x^2|n> and <n|M_y^2|n> for every eigenstate n.
  Eigen::VectorXd mx2;
  Eigen::VectorXd my2;
};

/// Full spectrum of the chain, block-diagonal in S^z. Immutable after
/// construction and safe to share between threads.
class SpectralDecomposition {
 public:
  SpectralDecomposition(const ChainSpec& spec, double zeeman_mev = 0.0,
                        int max_sites = kDefaultMaxSites);

  const ChainSpec& spec() const { return spec_; }
  double zeeman_mev() const { return zeeman_; }
  const SectorMap& sectors() const { return map_; }
  const std::vector<SectorSpectrum>& blocks() const { return blocks_; }
  double ground_energy() const { return ground_energy_; }
  std::uint32_t dimension() const { return map_.dimension(); }

  /// All 2^N eigenvalues, ascending.
  Eigen::VectorXd energies() const;

  /// Copy with every eigenvalue moved by `offset` meV.
  SpectralDecomposition shifted(double offset) const;

 private:
  ChainSpec spec_;
  double zeeman_;
  SectorMap map_;
  std::vector<SectorSpectrum> blocks_;
  double ground_energy_ = 0.0;
};

SpectralDecomposition diagonalize(const ChainSpec& spec, int max_sites = kDefaultMaxSites);

/// Canonical ensemble rho = exp(-H/kT)/Z over a decomposition, which must
/// outlive it. temperature_k == 0 selects the (degeneracy-averaged) ground
/// state projector.
class ThermalEnsemble {
 public:
  ThermalEnsemble(const SpectralDecomposition& decomposition, double temperature_k);

  const SpectralDecomposition& decomposition() const { return *decomp_; }
  double temperature() const { return temperature_; }
  /// 1/(k_B T) in 1/meV; +inf at T = 0.
  double beta() const { return beta_; }
  /// Normalised Boltzmann probabilities, one vector per sector block.
  const std::vector<Eigen::VectorXd>& weights() const { return weights_; }
  /// log Z, including the ground-state shift.
  double log_partition_function() const { return log_z_; }

 private:
  const SpectralDecomposition* decomp_;
  double temperature_;
  double beta_;
  double log_z_;
  std::vector<Eigen::VectorXd> weights_;
};

/// Z = Tr exp(-H/kT). May overflow to +inf at very low T for large chains;
/// prefer log_partition_function() there.
double partition_function(const ThermalEnsemble& ens);

/// <S^x_a S^x_b>, <S^y_a S^y_b>, <S^z_a S^z_b> in spin-1/2 units.
struct CorrelatorTriple {
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;

  double sum() const { return xx + yy + zz; }
};

/// Reduced state of a spin pair over {uu, ud, du, dd} (first label: site_a).
using PairDensity = Eigen::Matrix4cd;

CorrelatorTriple pair_correlators(const ThermalEnsemble& ens, int site_a, int site_b);

PairDensity reduced_pair_state(const ThermalEnsemble& ens, int site_a, int site_b);

/// Zero-field susceptibility per direction in units of g^2 mu_B^2 / meV,
/// chi_alpha = beta (<M_alpha^2> - <M_alpha>^2).
struct Susceptibility {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Susceptibility exact_susceptibility(const ThermalEnsemble& ens);

/// Dimensionless k T chi_z / (g^2 mu_B^2 N).
double exact_susceptibility_reduced(const ThermalEnsemble& ens);

struct FiniteDifferenceSusceptibility {
  double chi_z = 0.0;  // g^2 mu_B^2 / meV
  double delta_b = 0.0;
  /// Relative gap between the delta and delta/2 estimates; large values mean
  /// the step is outside the linear-response regime.
  double halving_discrepancy = 0.0;
  bool step_too_large = false;
};

/// chi_z from a central difference of <M_z>(B), each point obtained by
/// diagonalizing H - g mu_B B M_z. With `richardson` the delta and delta/2
/// central differences are combined to cancel the O(delta^2) term.
FiniteDifferenceSusceptibility susceptibility_finite_difference(const ChainSpec& spec,
                                                                double temperature_k, double g,
                                                                double delta_b_tesla,
                                                                bool richardson = true);

/// Tr(rho op) for an operator on the full 2^N space. Throws on a dimension
/// mismatch and when the result has an imaginary part above 1e-10.
template <typename Scalar>
double thermal_expectation(const Eigen::SparseMatrix<Scalar>& op, const ThermalEnsemble& ens) {
  const auto& decomp = ens.decomposition();
  const auto& map = decomp.sectors();
  const auto dim = static_cast<Eigen::Index>(decomp.dimension());
  if (op.rows() != dim || op.cols() != dim)
    throw std::invalid_argument("thermal_expectation: operator dimension does not match chain");

  std::complex<double> acc = 0.0;
  const auto& blocks = decomp.blocks();
  const auto& weights = ens.weights();
  for (Eigen::Index col = 0; col < op.outerSize(); ++col) {
    const auto c = static_cast<std::uint32_t>(col);
    const std::size_t sec = map.sector_of(c);
    const auto& v = blocks[sec].vectors;
    const Eigen::Index pc = map.position_of(c);
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(op, col); it; ++it) {
      const auto r = static_cast<std::uint32_t>(it.row());
      if (map.sector_of(r) != sec) continue;
      const Eigen::Index pr = map.position_of(r);
      // rho(c, r) = sum_n w_n v_n(c) v_n(r)
      const double rho_cr =
          (v.row(pc).transpose().cwiseProduct(weights[sec])).dot(v.row(pr).transpose());
      acc += std::complex<double>(it.value()) * rho_cr;
    }
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw std::domain_error("thermal_expectation: operator is not Hermitian (imaginary part " +
                            std::to_string(acc.imag()) + ")");
  return acc.real();
}

}  // namespace spinent
