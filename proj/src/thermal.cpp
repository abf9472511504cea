#include "spinent/thermal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

namespace spinent {

namespace {

// Boltzmann factors below exp(-700) are set to zero.
constexpr double kUnderflowExponent = 700.0;

// Raising (sign = +1) or lowering (sign = -1) part of M_x or M_y, mapping
// sector `from` to the adjacent sector.
SparseMatrixC transverse_block(const SectorMap& map, std::size_t from, int sign, Axis axis) {
  using C = std::complex<double>;
  const int n = map.n_sites();
  const Sector& src = map.sector(from);
  const std::size_t to = sign > 0 ? from + 1 : from - 1;
  const Sector& dst = map.sector(to);
  std::vector<Eigen::Triplet<C>> triplets;
  for (Eigen::Index col = 0; col < src.size(); ++col) {
    const std::uint32_t s = src.states[static_cast<std::size_t>(col)];
    for (int site = 0; site < n; ++site) {
      const bool down = is_down(s, site, n);
      // raising flips a down spin up
      if ((sign > 0) != down) continue;
      const std::uint32_t t = s ^ site_mask(site, n);
      C amp = axis == Axis::x ? C(0.5, 0.0) : C(0.0, down ? -0.5 : 0.5);
      triplets.emplace_back(map.position_of(t), col, amp);
    }
  }
  SparseMatrixC block(dst.size(), src.size());
  block.setFromTriplets(triplets.begin(), triplets.end());
  return block;
}

Eigen::VectorXd transverse_square(const SectorMap& map, std::size_t sec, const Eigen::MatrixXd& v,
                                  Axis axis) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.cols());
  const Eigen::MatrixXcd vc = v.cast<std::complex<double>>();
  if (sec + 1 < map.sectors().size()) {
    const Eigen::MatrixXcd up = transverse_block(map, sec, +1, axis) * vc;
    out += up.colwise().squaredNorm().transpose();
  }
  if (sec > 0) {
    const Eigen::MatrixXcd down = transverse_block(map, sec, -1, axis) * vc;
    out += down.colwise().squaredNorm().transpose();
  }
  return out;
}

void check_pair(const ThermalEnsemble& ens, int a, int b) {
  const int n = ens.decomposition().spec().n_sites;
  if (a < 0 || a >= n || b < 0 || b >= n)
    throw std::invalid_argument("pair site index out of range");
  if (a == b) throw std::invalid_argument("pair sites must be distinct");
}

// rho(r, c) for two product states in the same sector block.
double rho_element(const Eigen::MatrixXd& v, const Eigen::VectorXd& w, Eigen::Index r,
                   Eigen::Index c) {
  return v.row(r).transpose().cwiseProduct(w).dot(v.row(c).transpose());
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(const ChainSpec& spec, double zeeman_mev,
                                             int max_sites)
    : spec_(spec), zeeman_(zeeman_mev), map_((spec.validate(max_sites), spec.n_sites)) {
  ground_energy_ = std::numeric_limits<double>::infinity();
  blocks_.reserve(map_.sectors().size());
  for (std::size_t sec = 0; sec < map_.sectors().size(); ++sec) {
    const Eigen::MatrixXd h = sector_hamiltonian(spec_, map_, sec, zeeman_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
      throw NumericalError("eigensolver failed in sector 2Sz = " +
                           std::to_string(map_.sector(sec).two_sz));
    SectorSpectrum block;
    block.two_sz = map_.sector(sec).two_sz;
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
    block.mx2 = transverse_square(map_, sec, block.vectors, Axis::x);
    block.my2 = transverse_square(map_, sec, block.vectors, Axis::y);
    ground_energy_ = std::min(ground_energy_, block.energies.minCoeff());
    blocks_.push_back(std::move(block));
  }
}

Eigen::VectorXd SpectralDecomposition::energies() const {
  std::vector<double> all;
  all.reserve(dimension());
  for (const auto& b : blocks_) all.insert(all.end(), b.energies.begin(), b.energies.end());
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

SpectralDecomposition SpectralDecomposition::shifted(double offset) const {
  SpectralDecomposition copy = *this;
  for (auto& b : copy.blocks_) b.energies.array() += offset;
  copy.ground_energy_ += offset;
  return copy;
}

SpectralDecomposition diagonalize(const ChainSpec& spec, int max_sites) {
  return SpectralDecomposition(spec, 0.0, max_sites);
}

ThermalEnsemble::ThermalEnsemble(const SpectralDecomposition& decomposition, double temperature_k)
    : decomp_(&decomposition), temperature_(temperature_k) {
  if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k))
    throw std::invalid_argument("temperature must be finite and >= 0");
  const double e0 = decomposition.ground_energy();
  const auto& blocks = decomposition.blocks();
  weights_.reserve(blocks.size());
  double z_shifted = 0.0;

  if (temperature_k == 0.0) {
    beta_ = std::numeric_limits<double>::infinity();
    const double tol = 1e-10 * std::max(1.0, std::abs(e0));
    for (const auto& b : blocks) {
      Eigen::VectorXd w = (b.energies.array() - e0 <= tol).cast<double>();
      z_shifted += w.sum();
      weights_.push_back(std::move(w));
    }
    log_z_ = e0 < 0 ? std::numeric_limits<double>::infinity()
                    : (e0 > 0 ? -std::numeric_limits<double>::infinity() : std::log(z_shifted));
  } else {
    beta_ = 1.0 / (kBoltzmannMeVPerK * temperature_k);
    for (const auto& b : blocks) {
      Eigen::VectorXd w(b.energies.size());
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double x = beta_ * (b.energies[i] - e0);
        w[i] = x > kUnderflowExponent ? 0.0 : std::exp(-x);
      }
      z_shifted += w.sum();
      weights_.push_back(std::move(w));
    }
    log_z_ = std::log(z_shifted) - beta_ * e0;
  }
  for (auto& w : weights_) w /= z_shifted;
}

double partition_function(const ThermalEnsemble& ens) {
  return std::exp(ens.log_partition_function());
}

CorrelatorTriple pair_correlators(const ThermalEnsemble& ens, int site_a, int site_b) {
  check_pair(ens, site_a, site_b);
  const auto& decomp = ens.decomposition();
  const auto& map = decomp.sectors();
  const int n = map.n_sites();
  const std::uint32_t flip = site_mask(site_a, n) | site_mask(site_b, n);

  double zz = 0.0;
  double exchange = 0.0;  // sum over antiparallel s of rho(s ^ flip, s)
  for (std::size_t sec = 0; sec < map.sectors().size(); ++sec) {
    const auto& v = decomp.blocks()[sec].vectors;
    const auto& w = ens.weights()[sec];
    const Eigen::VectorXd diag = v.array().square().matrix() * w;
    const auto& states = map.sector(sec).states;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(states.size()); ++i) {
      const std::uint32_t s = states[static_cast<std::size_t>(i)];
      const bool da = is_down(s, site_a, n);
      const bool db = is_down(s, site_b, n);
      zz += diag[i] * (da == db ? 0.25 : -0.25);
      if (da != db) exchange += rho_element(v, w, map.position_of(s ^ flip), i);
    }
  }
  return {0.25 * exchange, 0.25 * exchange, zz};
}

PairDensity reduced_pair_state(const ThermalEnsemble& ens, int site_a, int site_b) {
  check_pair(ens, site_a, site_b);
  const auto& decomp = ens.decomposition();
  const auto& map = decomp.sectors();
  const int n = map.n_sites();
  const std::uint32_t ma = site_mask(site_a, n);
  const std::uint32_t mb = site_mask(site_b, n);

  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  for (std::size_t sec = 0; sec < map.sectors().size(); ++sec) {
    const auto& v = decomp.blocks()[sec].vectors;
    const auto& w = ens.weights()[sec];
    const auto& states = map.sector(sec).states;
    for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(states.size()); ++col) {
      const std::uint32_t s = states[static_cast<std::size_t>(col)];
      const int j = 2 * int((s & ma) != 0) + int((s & mb) != 0);
      const std::uint32_t rest = s & ~(ma | mb);
      for (int i = 0; i < 4; ++i) {
        const std::uint32_t t = rest | ((i & 2) ? ma : 0u) | ((i & 1) ? mb : 0u);
        if (map.sector_of(t) != sec) continue;
        rho(i, j) += rho_element(v, w, map.position_of(t), col);
      }
    }
  }
  return rho.cast<std::complex<double>>();
}

Susceptibility exact_susceptibility(const ThermalEnsemble& ens) {
  if (!(ens.temperature() > 0.0))
    throw std::invalid_argument("exact_susceptibility requires T > 0");
  const auto& blocks = ens.decomposition().blocks();
  double mz = 0.0;
  double mz2 = 0.0;
  double mx2 = 0.0;
  double my2 = 0.0;
  for (std::size_t sec = 0; sec < blocks.size(); ++sec) {
    const auto& w = ens.weights()[sec];
    const double m = 0.5 * blocks[sec].two_sz;
    const double p = w.sum();
    mz += p * m;
    mz2 += p * m * m;
    mx2 += w.dot(blocks[sec].mx2);
    my2 += w.dot(blocks[sec].my2);
  }
  // <M_x> and <M_y> vanish identically: both operators are off-diagonal in S^z.
  const double beta = ens.beta();
  return {beta * mx2, beta * my2, beta * (mz2 - mz * mz)};
}

double exact_susceptibility_reduced(const ThermalEnsemble& ens) {
  const double chi = exact_susceptibility(ens).z;
  return chi / (ens.beta() * ens.decomposition().spec().n_sites);
}

FiniteDifferenceSusceptibility susceptibility_finite_difference(const ChainSpec& spec,
                                                                double temperature_k, double g,
                                                                double delta_b_tesla,
                                                                bool richardson) {
  if (!(delta_b_tesla > 0.0)) throw std::invalid_argument("delta_b must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
  if (!(temperature_k > 0.0)) throw std::invalid_argument("temperature must be positive");
  spec.validate();
  const SparseMatrixC mz_op = total_spin(Axis::z, spec.n_sites);

  auto magnetization = [&](double zeeman) {
    SpectralDecomposition decomp(spec, zeeman);
    ThermalEnsemble ens(decomp, temperature_k);
    return thermal_expectation(mz_op, ens);
  };
  auto central = [&](double delta_b) {
    const double h = g * kBohrMagnetonMeVPerT * delta_b;
    return (magnetization(h) - magnetization(-h)) / (2.0 * h);
  };

  const double full = central(delta_b_tesla);
  const double half = central(0.5 * delta_b_tesla);
  FiniteDifferenceSusceptibility out;
  out.delta_b = delta_b_tesla;
  out.chi_z = richardson ? (4.0 * half - full) / 3.0 : full;
  out.halving_discrepancy = std::abs(full - half) / std::max(std::abs(half), 1e-300);
  out.step_too_large = out.halving_discrepancy > 1e-3;
  return out;
}

}  // namespace spinent
