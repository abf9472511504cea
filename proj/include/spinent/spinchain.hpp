#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spinent {

using SparseMatrixR = Eigen::SparseMatrix<double>;
using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;

inline constexpr int kDefaultMaxSites = 16;

enum class Boundary { periodic, open };
enum class Axis { x, y, z };

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary b);

/// Alternating spin-1/2 Heisenberg chain. Dimer k occupies sites (2k, 2k+1)
/// and is coupled internally by j1; neighbouring dimers are coupled by j2.
/// Couplings are in meV. Defaults are copper nitrate.
struct ChainSpec {
  int n_sites = 12;
  double j1 = 0.44;
  double j2 = 0.11;
  Boundary boundary = Boundary::periodic;

  /// Throws std::invalid_argument when the chain is not an even, strongly
  /// alternating chain of at most max_sites sites.
  void validate(int max_sites = kDefaultMaxSites) const;
};

struct Bond {
  int a;
  int b;
  double coupling;
};

/// Bond list of the chain. A two-site ring has no closing bond, since it
/// would duplicate the intradimer bond.
std::vector<Bond> chain_bonds(const ChainSpec& spec);

// Basis convention: basis state s has site i spin-down iff bit (n-1-i) of s
// is set, so index 0 is all-up and site 0 is the most significant factor of
// the tensor product.
inline bool is_down(std::uint32_t state, int site, int n_sites) {
  return (state >> (n_sites - 1 - site)) & 1u;
}
inline double sz_of(std::uint32_t state, int site, int n_sites) {
  return is_down(state, site, n_sites) ? -0.5 : 0.5;
}
inline std::uint32_t site_mask(int site, int n_sites) { return 1u << (n_sites - 1 - site); }

/// Full 2^N Hamiltonian, optionally with a Zeeman term -zeeman_mev * M_z
/// (zeeman_mev = g mu_B B).
SparseMatrixR build_hamiltonian(const ChainSpec& spec, double zeeman_mev = 0.0,
                                int max_sites = kDefaultMaxSites);

/// Spin-1/2 component on one site, identity elsewhere.
SparseMatrixC spin_operator(int site, Axis axis, int n_sites);

/// Total magnetisation M_alpha = sum_j S^alpha_j.
SparseMatrixC total_spin(Axis axis, int n_sites);

/// S_a . S_b on the full space.
SparseMatrixR spin_dot(int site_a, int site_b, int n_sites);

struct Sector {
  int two_sz;  // 2 * S^z_total
  std::vector<std::uint32_t> states;

  double sz() const { return 0.5 * two_sz; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
};

/// Partition of the 2^N product basis into fixed-S^z sectors, ascending in S^z.
class SectorMap {
 public:
  explicit SectorMap(int n_sites);

  int n_sites() const { return n_sites_; }
  std::span<const Sector> sectors() const { return sectors_; }
  const Sector& sector(std::size_t i) const { return sectors_[i]; }
  std::size_t sector_of(std::uint32_t state) const { return sector_index_[state]; }
  Eigen::Index position_of(std::uint32_t state) const { return position_[state]; }
  std::uint32_t dimension() const { return static_cast<std::uint32_t>(sector_index_.size()); }

 private:
  int n_sites_;
  std::vector<Sector> sectors_;
  std::vector<std::size_t> sector_index_;
  std::vector<Eigen::Index> position_;
};

SectorMap sector_map(int n_sites);

/// Dense block of H + Zeeman term restricted to one sector.
Eigen::MatrixXd sector_hamiltonian(const ChainSpec& spec, const SectorMap& map, std::size_t sector,
                                   double zeeman_mev = 0.0);

}  // namespace spinent
