#include "spinent/spinchain.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace spinent {

Boundary parse_boundary(const std::string& name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + name + "' (expected periodic or open)");
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

void ChainSpec::validate(int max_sites) const {
  if (n_sites < 2 || n_sites % 2 != 0)
    throw std::invalid_argument("n_sites must be even and >= 2, got " + std::to_string(n_sites));
  if (n_sites > max_sites)
    throw std::invalid_argument("n_sites = " + std::to_string(n_sites) + " exceeds the maximum of " +
                                std::to_string(max_sites));
  if (!(j1 > 0.0) || !std::isfinite(j1)) throw std::invalid_argument("j1 must be positive");
  if (!(j2 >= 0.0) || !std::isfinite(j2)) throw std::invalid_argument("j2 must be non-negative");
  if (!(j2 < j1)) throw std::invalid_argument("j2/j1 must be below 1 (strongly alternating chain)");
}

std::vector<Bond> chain_bonds(const ChainSpec& spec) {
  std::vector<Bond> bonds;
  const int n = spec.n_sites;
  for (int i = 0; i + 1 < n; ++i) bonds.push_back({i, i + 1, i % 2 == 0 ? spec.j1 : spec.j2});
  if (spec.boundary == Boundary::periodic && n > 2) bonds.push_back({n - 1, 0, spec.j2});
  return bonds;
}

namespace {

void check_site(int site, int n_sites) {
  if (n_sites < 1 || n_sites > 30) throw std::invalid_argument("n_sites out of range");
  if (site < 0 || site >= n_sites)
    throw std::invalid_argument("site " + std::to_string(site) + " out of range [0, " +
                                std::to_string(n_sites) + ")");
}

}  // namespace

SparseMatrixR build_hamiltonian(const ChainSpec& spec, double zeeman_mev, int max_sites) {
  spec.validate(max_sites);
  const int n = spec.n_sites;
  const std::uint32_t dim = 1u << n;
  const auto bonds = chain_bonds(spec);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * (bonds.size() + 1));
  for (std::uint32_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (const auto& bond : bonds) {
      const bool da = is_down(s, bond.a, n);
      const bool db = is_down(s, bond.b, n);
      diag += bond.coupling * (da == db ? 0.25 : -0.25);
      if (da != db) {
        const std::uint32_t t = s ^ site_mask(bond.a, n) ^ site_mask(bond.b, n);
        triplets.emplace_back(t, s, 0.5 * bond.coupling);
      }
    }
    if (zeeman_mev != 0.0) {
      const double mz = 0.5 * n - std::popcount(s);
      diag -= zeeman_mev * mz;
    }
    triplets.emplace_back(s, s, diag);
  }
  SparseMatrixR h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

SparseMatrixC spin_operator(int site, Axis axis, int n_sites) {
  check_site(site, n_sites);
  using C = std::complex<double>;
  const std::uint32_t dim = 1u << n_sites;
  const std::uint32_t mask = site_mask(site, n_sites);
  std::vector<Eigen::Triplet<C>> triplets;
  triplets.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const bool down = s & mask;
    switch (axis) {
      case Axis::z:
        triplets.emplace_back(s, s, C(down ? -0.5 : 0.5, 0.0));
        break;
      case Axis::x:
        triplets.emplace_back(s ^ mask, s, C(0.5, 0.0));
        break;
      case Axis::y:
        // S^y|up> = (i/2)|down>, S^y|down> = (-i/2)|up>
        triplets.emplace_back(s ^ mask, s, C(0.0, down ? -0.5 : 0.5));
        break;
    }
  }
  SparseMatrixC op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseMatrixC total_spin(Axis axis, int n_sites) {
  SparseMatrixC total = spin_operator(0, axis, n_sites);
  for (int i = 1; i < n_sites; ++i) total += spin_operator(i, axis, n_sites);
  return total;
}

SparseMatrixR spin_dot(int site_a, int site_b, int n_sites) {
  check_site(site_a, n_sites);
  check_site(site_b, n_sites);
  if (site_a == site_b) throw std::invalid_argument("spin_dot requires distinct sites");
  const std::uint32_t dim = 1u << n_sites;
  const std::uint32_t flip = site_mask(site_a, n_sites) | site_mask(site_b, n_sites);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::uint32_t s = 0; s < dim; ++s) {
    const bool da = is_down(s, site_a, n_sites);
    const bool db = is_down(s, site_b, n_sites);
    triplets.emplace_back(s, s, da == db ? 0.25 : -0.25);
    if (da != db) triplets.emplace_back(s ^ flip, s, 0.5);
  }
  SparseMatrixR op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SectorMap::SectorMap(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 24) throw std::invalid_argument("sector_map: n_sites out of range");
  const std::uint32_t dim = 1u << n_sites;
  sectors_.resize(static_cast<std::size_t>(n_sites) + 1);
  for (int down = 0; down <= n_sites; ++down) {
    // ascending S^z: most spins down first
    sectors_[static_cast<std::size_t>(n_sites - down)].two_sz = n_sites - 2 * down;
  }
  sector_index_.resize(dim);
  position_.resize(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const auto idx = static_cast<std::size_t>(std::popcount(s));
    const std::size_t sec = static_cast<std::size_t>(n_sites) - idx;
    sector_index_[s] = sec;
    position_[s] = static_cast<Eigen::Index>(sectors_[sec].states.size());
    sectors_[sec].states.push_back(s);
  }
}

SectorMap sector_map(int n_sites) { return SectorMap(n_sites); }

Eigen::MatrixXd sector_hamiltonian(const ChainSpec& spec, const SectorMap& map, std::size_t sector,
                                   double zeeman_mev) {
  const int n = spec.n_sites;
  if (map.n_sites() != n) throw std::invalid_argument("sector map size does not match chain");
  const Sector& sec = map.sector(sector);
  const auto bonds = chain_bonds(spec);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sec.size(), sec.size());
  for (Eigen::Index col = 0; col < sec.size(); ++col) {
    const std::uint32_t s = sec.states[static_cast<std::size_t>(col)];
    for (const auto& bond : bonds) {
      const bool da = is_down(s, bond.a, n);
      const bool db = is_down(s, bond.b, n);
      h(col, col) += bond.coupling * (da == db ? 0.25 : -0.25);
      if (da != db) {
        const std::uint32_t t = s ^ site_mask(bond.a, n) ^ site_mask(bond.b, n);
        h(map.position_of(t), col) += 0.5 * bond.coupling;
      }
    }
    h(col, col) -= zeeman_mev * sec.sz();
  }
  return h;
}

}  // namespace spinent
