#pragma once

#include <random>

#include "osnorm/linalg.hpp"
#include "osnorm/seqspace.hpp"

namespace testutil {

inline osnorm::ComplexMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  osnorm::ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  return m;
}

inline osnorm::MatrixSeq random_seq(Eigen::Index n, int support, std::mt19937_64& rng) {
  osnorm::MatrixSeq x(n);
  for (int k = 1; k <= support; ++k) x.add_component(k, random_matrix(n, n, rng));
  return x;
}

// Largest eigenvalue of m* m, square-rooted.
inline double eig_norm(const osnorm::ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<osnorm::ComplexMatrix> es(m.adjoint() * m);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

} // namespace testutil
