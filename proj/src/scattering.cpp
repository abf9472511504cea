#include "spinent/scattering.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spinent::scattering {

LatticeGeometry LatticeGeometry::copper_nitrate(double j1) {
  LatticeGeometry g;
  g.bonds.push_back({Eigen::Vector3d(0.252, 0.027, 0.228), j1, 0});
  g.dimer_links.push_back(Eigen::Vector3d(0.5, 0.5, 0.5));
  g.chain_vector = Eigen::Vector3d(0.5, 0.5, 0.5);
  g.average_mirror = true;
  return g;
}

void LatticeGeometry::validate() const {
  for (const auto& b : bonds) {
    if (!b.d.allFinite() || !std::isfinite(b.coupling))
      throw std::invalid_argument("bond vectors and couplings must be finite");
    if (b.slot < 0) throw std::invalid_argument("bond correlation slot must be non-negative");
  }
  for (const auto& u : dimer_links)
    if (!u.allFinite()) throw std::invalid_argument("dimer link vectors must be finite");
  if (!chain_vector.allFinite()) throw std::invalid_argument("chain vector must be finite");
}

void SmaParams::validate(const LatticeGeometry& geometry) const {
  if (!(j1 > 0.0)) throw std::invalid_argument("SMA j1 must be positive");
  if (!(renormalization > 0.0 && renormalization <= 1.0))
    throw std::invalid_argument("renormalization n(T) must lie in (0, 1]");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  if (!std::isfinite(gamma1)) throw std::invalid_argument("gamma1 must be finite");
  if (j_u.size() != geometry.dimer_links.size())
    throw std::invalid_argument("j_u must have one coupling per dimer link");
  for (double j : j_u)
    if (!std::isfinite(j)) throw std::invalid_argument("j_u must be finite");
}

double first_moment(const WaveVector& q, std::span<const double> correlators,
                    const LatticeGeometry& geometry) {
  double sum = 0.0;
  for (const auto& bond : geometry.bonds) {
    if (static_cast<std::size_t>(bond.slot) >= correlators.size())
      throw std::invalid_argument("no correlation supplied for bond slot " + std::to_string(bond.slot));
    double structure = 1.0 - std::cos(q.dot(bond.d));
    if (geometry.average_mirror) {
      const Eigen::Vector3d mirrored(bond.d.x(), -bond.d.y(), bond.d.z());
      structure = 0.5 * (structure + 1.0 - std::cos(q.dot(mirrored)));
    }
    sum += bond.coupling * correlators[static_cast<std::size_t>(bond.slot)] * structure;
  }
  return -sum / 3.0;
}

double dispersion(const WaveVector& q, const SmaParams& params, const LatticeGeometry& geometry) {
  if (params.j_u.size() != geometry.dimer_links.size())
    throw std::invalid_argument("j_u must have one coupling per dimer link");
  double band = 0.0;
  for (std::size_t i = 0; i < params.j_u.size(); ++i)
    band += params.j_u[i] * std::cos(q.dot(geometry.dimer_links[i]));
  return params.j1 - params.renormalization * 0.5 * band;
}

double linewidth(const WaveVector& q, const SmaParams& params, const LatticeGeometry& geometry) {
  return params.gamma0 + 0.5 * params.gamma1 * std::cos(q.dot(geometry.chain_vector));
}

double sma_mode_weight(const WaveVector& q, double temperature, const SmaParams& params,
                       std::span<const double> correlators, const LatticeGeometry& geometry) {
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  const double eps = dispersion(q, params, geometry);
  if (!(eps > 0.0))
    throw std::domain_error("dispersion is non-positive; single mode approximation breaks down");
  double balance = 1.0;
  if (temperature > 0.0) balance = -1.0 / std::expm1(-eps / (kBoltzmannMeVPerK * temperature));
  return first_moment(q, correlators, geometry) / eps * balance;
}

double sma_scattering(const WaveVector& q, double omega_mev, double temperature,
                      const SmaParams& params, std::span<const double> correlators,
                      const LatticeGeometry& geometry) {
  if (params.shape != SpectralShape::gaussian)
    throw std::invalid_argument("pointwise S(Q, omega) needs the Gaussian spectral shape");
  const double weight = sma_mode_weight(q, temperature, params, correlators, geometry);
  const double gamma = linewidth(q, params, geometry);
  if (!(gamma > 0.0)) throw std::domain_error("linewidth is non-positive");
  const double sigma = gamma / std::sqrt(2.0 * std::log(2.0));
  const double x = (omega_mev - dispersion(q, params, geometry)) / sigma;
  return weight * std::exp(-0.5 * x * x) / (sigma * std::sqrt(2.0 * kPi));
}

void ScatteringDataset::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!(r.sigma > 0.0) || !std::isfinite(r.sigma) || !std::isfinite(r.s) ||
        !std::isfinite(r.omega) || !std::isfinite(r.q.h) || !std::isfinite(r.q.k) ||
        !std::isfinite(r.q.l))
      throw std::invalid_argument("dataset record " + std::to_string(i) +
                                  " is not finite or has sigma <= 0");
  }
}

DatasetGrid line_grid(const WaveVector& from, const WaveVector& to, int n_q, double omega_min,
                      double omega_max, int n_omega) {
  if (n_q < 1 || n_omega < 1) throw std::invalid_argument("grid needs at least one point per axis");
  if (!(omega_max >= omega_min)) throw std::invalid_argument("omega_max must be >= omega_min");
  auto lerp = [](double a, double b, int i, int n) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
  DatasetGrid grid;
  for (int i = 0; i < n_q; ++i)
    grid.q.push_back({lerp(from.h, to.h, i, n_q), lerp(from.k, to.k, i, n_q), lerp(from.l, to.l, i, n_q)});
  for (int i = 0; i < n_omega; ++i) grid.omega.push_back(lerp(omega_min, omega_max, i, n_omega));
  return grid;
}

ScatteringDataset generate_synthetic_dataset(const SmaParams& params,
                                             std::span<const double> correlators,
                                             const LatticeGeometry& geometry,
                                             const DatasetGrid& grid, std::uint64_t noise_seed) {
  geometry.validate();
  params.validate(geometry);
  if (!(grid.noise >= 0.0) || !(grid.floor_fraction >= 0.0))
    throw std::invalid_argument("noise parameters must be non-negative");

  ScatteringDataset data;
  data.temperature = grid.temperature;
  data.records.reserve(grid.q.size() * grid.omega.size());
  double s_max = 0.0;
  for (const auto& q : grid.q) {
    for (double w : grid.omega) {
      const double s = sma_scattering(q, w, grid.temperature, params, correlators, geometry);
      data.records.push_back({q, w, s, 0.0});
      s_max = std::max(s_max, std::abs(s));
    }
  }

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = grid.noise > 0.0 ? grid.noise : 1.0;
  for (auto& r : data.records) {
    double base = std::abs(r.s) + grid.floor_fraction * s_max;
    if (base == 0.0) base = 1.0;
    r.sigma = scale * base;
    if (grid.noise > 0.0) r.s += r.sigma * normal(rng);
  }
  return data;
}

namespace {

class FitProblem {
 public:
  FitProblem(const ScatteringDataset& data, const SmaParams& params,
             std::span<const double> correlators, const LatticeGeometry& geometry,
             const FitSelection& free)
      : data_(data), base_(params), corr_(correlators.begin(), correlators.end()),
        geometry_(geometry), free_(free) {
    if (corr_.empty()) throw std::invalid_argument("fit needs at least the intradimer correlation");
    for (std::size_t i : free.j_u)
      if (i >= params.j_u.size()) throw std::invalid_argument("free j_u index out of range");
    if (free.corr) names_.push_back("corr");
    for (std::size_t i : free.j_u) names_.push_back("j_u[" + std::to_string(i) + "]");
    if (free.gamma0) names_.push_back("gamma0");
    if (free.gamma1) names_.push_back("gamma1");
    if (free.renormalization) names_.push_back("n");
  }

  const std::vector<std::string>& names() const { return names_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(names_.size()); }

  Eigen::VectorXd pack() const {
    Eigen::VectorXd p(size());
    Eigen::Index k = 0;
    if (free_.corr) p[k++] = corr_[0];
    for (std::size_t i : free_.j_u) p[k++] = base_.j_u[i];
    if (free_.gamma0) p[k++] = base_.gamma0;
    if (free_.gamma1) p[k++] = base_.gamma1;
    if (free_.renormalization) p[k++] = base_.renormalization;
    return p;
  }

  void unpack(const Eigen::VectorXd& p, SmaParams& params, std::vector<double>& corr) const {
    params = base_;
    corr = corr_;
    Eigen::Index k = 0;
    if (free_.corr) corr[0] = p[k++];
    for (std::size_t i : free_.j_u) params.j_u[i] = p[k++];
    if (free_.gamma0) params.gamma0 = p[k++];
    if (free_.gamma1) params.gamma1 = p[k++];
    if (free_.renormalization) params.renormalization = p[k++];
  }

  /// Model values divided by sigma; nullopt where the parameters are invalid.
  std::optional<Eigen::VectorXd> model(const Eigen::VectorXd& p) const {
    SmaParams params;
    std::vector<double> corr;
    unpack(p, params, corr);
    Eigen::VectorXd m(static_cast<Eigen::Index>(data_.records.size()));
    try {
      params.validate(geometry_);
      for (std::size_t i = 0; i < data_.records.size(); ++i) {
        const auto& r = data_.records[i];
        m[static_cast<Eigen::Index>(i)] =
            sma_scattering(r.q, r.omega, data_.temperature, params, corr, geometry_) / r.sigma;
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
    return m;
  }

  Eigen::VectorXd scaled_data() const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data_.records.size()));
    for (std::size_t i = 0; i < data_.records.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = data_.records[i].s / data_.records[i].sigma;
    return y;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(data_.records.size()), size());
    for (Eigen::Index j = 0; j < size(); ++j) {
      const double h = 1e-6 * std::max(std::abs(p[j]), 1e-2);
      Eigen::VectorXd lo = p;
      Eigen::VectorXd hi = p;
      lo[j] -= h;
      hi[j] += h;
      auto mlo = model(lo);
      auto mhi = model(hi);
      if (mlo && mhi) {
        jac.col(j) = (*mhi - *mlo) / (2.0 * h);
      } else {
        // one-sided at a parameter boundary
        auto m0 = model(p);
        if (mhi && m0) jac.col(j) = (*mhi - *m0) / h;
        else if (mlo && m0) jac.col(j) = (*m0 - *mlo) / h;
        else throw NumericalError("cannot evaluate Jacobian for parameter " + names_[static_cast<std::size_t>(j)]);
      }
    }
    return jac;
  }

 private:
  const ScatteringDataset& data_;
  SmaParams base_;
  std::vector<double> corr_;
  const LatticeGeometry& geometry_;
  FitSelection free_;
  std::vector<std::string> names_;
};

}  // namespace

FitResult fit_intradimer_correlation(const ScatteringDataset& data, const SmaParams& params,
                                     std::span<const double> correlators,
                                     const LatticeGeometry& geometry, const FitSelection& free,
                                     const FitOptions& options) {
  data.validate();
  geometry.validate();
  params.validate(geometry);
  FitProblem problem(data, params, correlators, geometry, free);
  const Eigen::Index n_par = problem.size();
  if (n_par == 0) throw std::invalid_argument("no free parameters selected");
  const auto n_pts = static_cast<Eigen::Index>(data.records.size());
  if (n_pts < 10 * n_par)
    throw std::invalid_argument("fit needs at least 10 data points per free parameter");

  const Eigen::VectorXd y = problem.scaled_data();
  Eigen::VectorXd p = problem.pack();
  auto m = problem.model(p);
  if (!m) throw std::invalid_argument("initial fit parameters are outside the model's domain");
  double chi2 = (y - *m).squaredNorm();

  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations && !converged; ++iter) {
    const Eigen::MatrixXd jac = problem.jacobian(p);
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * (y - *m);
    const Eigen::VectorXd step = normal.completeOrthogonalDecomposition().solve(grad);

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 50; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = p + t * step;
      auto mt = problem.model(trial);
      if (!mt) continue;
      const double chi2_trial = (y - *mt).squaredNorm();
      if (chi2_trial <= chi2) {
        const double drop = chi2 - chi2_trial;
        const double moved = (t * step).norm();
        p = trial;
        m = std::move(mt);
        converged = drop <= options.tolerance * std::max(chi2, 1e-300) ||
                    moved <= 1e-14 * std::max(1.0, p.norm());
        chi2 = chi2_trial;
        accepted = true;
        break;
      }
    }
    // no downhill step left: already at the minimum to working precision
    if (!accepted) converged = true;
  }
  if (!converged)
    throw NumericalError("fit did not converge in " + std::to_string(options.max_iterations) +
                         " iterations");

  FitResult result;
  result.names = problem.names();
  result.values = p;
  result.iterations = iter;
  result.chi2 = chi2;
  result.reduced_chi2 = chi2 / static_cast<double>(n_pts - n_par);

  const Eigen::MatrixXd jac = problem.jacobian(p);
  const Eigen::MatrixXd normal = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lam_max = lam.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n_par);
  result.errors = Eigen::VectorXd::Zero(n_par);
  std::vector<bool> null_dir(static_cast<std::size_t>(n_par), false);
  for (Eigen::Index k = 0; k < n_par; ++k) {
    if (lam_max > 0.0 && lam[k] > 1e-10 * lam_max) {
      inv[k] = 1.0 / lam[k];
    } else {
      result.degenerate = true;
      null_dir[static_cast<std::size_t>(k)] = true;
    }
  }
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  result.covariance = vecs * inv.asDiagonal() * vecs.transpose();
  for (Eigen::Index j = 0; j < n_par; ++j) {
    double err = std::sqrt(std::max(0.0, result.covariance(j, j)));
    for (Eigen::Index k = 0; k < n_par; ++k)
      if (null_dir[static_cast<std::size_t>(k)] && std::abs(vecs(j, k)) > 1e-6)
        err = std::numeric_limits<double>::infinity();
    result.errors[j] = err;
  }

  std::vector<double> corr;
  problem.unpack(p, result.params, corr);
  result.corr = corr[0];
  result.corr_error = free.corr ? result.errors[0] : 0.0;
  return result;
}

void write_dataset_csv(std::ostream& out, const ScatteringDataset& data) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "# temperature_k=%.17g\n", data.temperature);
  out << buf << "h,k,l,omega_mev,s_value,sigma\n";
  for (const auto& r : data.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.q.h, r.q.k, r.q.l,
                  r.omega, r.s, r.sigma);
    out << buf;
  }
}

ScatteringDataset read_dataset_csv(std::istream& in) {
  ScatteringDataset data;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("temperature_k=");
      if (pos != std::string::npos) data.temperature = std::stod(line.substr(pos + 14));
      continue;
    }
    if (!header_seen) {
      if (line != "h,k,l,omega_mev,s_value,sigma")
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected header h,k,l,omega_mev,s_value,sigma");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    double v[6];
    int count = 0;
    try {
      while (std::getline(ss, cell, ',')) {
        if (count >= 6) throw std::invalid_argument("too many columns");
        std::size_t used = 0;
        v[count] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        ++count;
      }
      if (count != 6) throw std::invalid_argument("expected 6 columns");
      if (!(v[5] > 0.0)) throw std::invalid_argument("sigma must be positive");
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
    data.records.push_back({{v[0], v[1], v[2]}, v[3], v[4], v[5]});
  }
  if (!header_seen) throw std::invalid_argument("scattering CSV has no header line");
  data.validate();
  return data;
}

}  // namespace spinent::scattering
