#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "osnorm/errors.hpp"

namespace osnorm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace linalg {

/// Largest dimension for which operator_norm uses a full SVD.
inline constexpr Eigen::Index kSvdCutoff = 64;

namespace detail {

// Power iteration on m*m; the caller guarantees m is nonzero.
inline double power_iteration_norm(const ComplexMatrix& m) {
  constexpr double tol = 1e-12;
  constexpr int max_iter = 100000;
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  ComplexVector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    ComplexVector w = m.adjoint() * (m * v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (std::abs(next - sigma2) <= tol * next) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::sqrt(sigma2);
}

} // namespace detail

/// Largest singular value. Full SVD up to kSvdCutoff, power iteration above.
inline double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) throw DimensionError("operator_norm: empty matrix");
  if (std::max(m.rows(), m.cols()) <= kSvdCutoff) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
  }
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return detail::power_iteration_norm(m);
}

/// Kronecker product; entry ((i,k),(j,l)) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) throw DimensionError("kron: empty operand");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Block-diagonal diag(a, b).
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Leading singular triple (sigma, u, v) with m v = sigma u.
struct SingularTriple {
  double sigma = 0.0;
  ComplexVector left;
  ComplexVector right;
};

inline SingularTriple top_singular(const ComplexMatrix& m) {
  if (m.size() == 0) throw DimensionError("top_singular: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

inline ComplexMatrix elementary(Eigen::Index rows, Eigen::Index cols, Eigen::Index i,
                                Eigen::Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

} // namespace linalg
} // namespace osnorm
