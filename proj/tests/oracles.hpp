#pragma once

// Test-only reference computations. Everything here is built from dense
// Kronecker products and textbook formulas, independent of the sector-blocked
// library code it checks.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using C = std::complex<double>;

inline constexpr double kB = 0.0861733;

inline Mat pauli_half(char axis) {
  Mat s(2, 2);
  if (axis == 'x') s << 0, 0.5, 0.5, 0;
  else if (axis == 'y') s << 0, C(0, -0.5), C(0, 0.5), 0;
  else s << 0.5, 0, 0, -0.5;
  return s;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Site 0 is the leftmost tensor factor.
inline Mat site_op(int site, char axis, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, i == site ? pauli_half(axis) : Mat::Identity(2, 2));
  return out;
}

inline Mat dot_op(int a, int b, int n) {
  Mat out = Mat::Zero(1 << n, 1 << n);
  for (char ax : {'x', 'y', 'z'}) out += site_op(a, ax, n) * site_op(b, ax, n);
  return out;
}

inline Mat total(char axis, int n) {
  Mat out = Mat::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) out += site_op(i, axis, n);
  return out;
}

/// Dense alternating-chain Hamiltonian from Kronecker products.
inline Mat hamiltonian(int n, double j1, double j2, bool periodic, double zeeman = 0.0) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (int i = 0; i + 1 < n; ++i) h += (i % 2 == 0 ? j1 : j2) * dot_op(i, i + 1, n);
  if (periodic && n > 2) h += j2 * dot_op(n - 1, 0, n);
  if (zeeman != 0.0) h -= zeeman * total('z', n);
  return h;
}

/// Dense thermal density matrix exp(-H/kT)/Z.
inline Mat thermal_state(const Mat& h, double temperature) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd e = es.eigenvalues();
  const double beta = 1.0 / (kB * temperature);
  Eigen::VectorXd w = (-(beta * (e.array() - e.minCoeff()))).exp();
  w /= w.sum();
  return es.eigenvectors() * w.cast<C>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Plain sum of exp(-beta E) over a spectrum.
inline double partition_sum(const Eigen::VectorXd& energies, double temperature) {
  double z = 0.0;
  for (double e : energies) z += std::exp(-e / (kB * temperature));
  return z;
}

/// Partial trace onto sites (a, b) with index 2*bit_a + bit_b, by explicit
/// loops over all basis pairs.
inline Eigen::Matrix4cd partial_trace(const Mat& rho, int a, int b, int n) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  const int dim = 1 << n;
  auto bit = [n](int s, int site) { return (s >> (n - 1 - site)) & 1; };
  const int mask = (1 << (n - 1 - a)) | (1 << (n - 1 - b));
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(2 * bit(r, a) + bit(r, b), 2 * bit(c, a) + bit(c, b)) += rho(r, c);
    }
  return out;
}

inline Eigen::Matrix4cd singlet_projector() {
  Eigen::Vector4cd psi(0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0);
  return psi * psi.adjoint();
}

inline Eigen::Matrix4cd werner(double p) {
  return p * singlet_projector() + (1 - p) * Eigen::Matrix4cd::Identity() / 4.0;
}

/// Concurrence via the non-Hermitian product rho * rho~ and a general
/// eigensolver.
inline double concurrence_direct(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
