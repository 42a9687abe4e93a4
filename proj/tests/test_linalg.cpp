#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "osnorm/errors.hpp"
#include "osnorm/linalg.hpp"
#include "osnorm/seqspace.hpp"
#include "test_util.hpp"

using namespace osnorm;
using linalg::operator_norm;

TEST(OperatorNorm, Identity) {
  EXPECT_NEAR(operator_norm(ComplexMatrix::Identity(3, 3)), 1.0, 1e-15);
}

TEST(OperatorNorm, RademacherMatrix) {
  EXPECT_NEAR(operator_norm(a_witness(4)), std::pow(2.0, 1.5), 1e-12);
}

TEST(OperatorNorm, RankOne) {
  std::mt19937_64 rng(1);
  ComplexVector u = testutil::random_matrix(5, 1, rng), v = testutil::random_matrix(4, 1, rng);
  u.normalize();
  v.normalize();
  EXPECT_NEAR(operator_norm(u * v.adjoint()), 1.0, 1e-12);
}

TEST(OperatorNorm, EmptyThrows) {
  EXPECT_THROW(operator_norm(ComplexMatrix(0, 3)), DimensionError);
}

TEST(OperatorNorm, HomogeneousAndAdjointInvariant) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = testutil::random_matrix(1 + t % 6, 1 + (t * 7) % 5, rng);
    const Complex c(std::cos(t), 3.0 * std::sin(t));
    const double base = operator_norm(m);
    EXPECT_NEAR(operator_norm(c * m), std::abs(c) * base, 1e-12 * std::abs(c) * base);
    EXPECT_NEAR(operator_norm(m.adjoint()), base, 1e-12 * base);
  }
}

TEST(OperatorNorm, MatchesEigenvalueOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = testutil::random_matrix(2 + t % 7, 2 + t % 5, rng);
    const double want = testutil::eig_norm(m);
    EXPECT_NEAR(operator_norm(m), want, 1e-9 * want);
  }
}

TEST(OperatorNorm, PowerIterationAboveCutoff) {
  std::mt19937_64 rng(4);
  const ComplexMatrix m = testutil::random_matrix(80, 70, rng);
  const double want = testutil::eig_norm(m);
  EXPECT_NEAR(operator_norm(m), want, 1e-9 * want);
}

TEST(Kron, IdentityAndShape) {
  const ComplexMatrix k = linalg::kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3));
  EXPECT_TRUE(k.isApprox(ComplexMatrix::Identity(6, 6)));
  std::mt19937_64 rng(5);
  const ComplexMatrix a = testutil::random_matrix(2, 3, rng), b = testutil::random_matrix(4, 2, rng);
  const ComplexMatrix ab = linalg::kron(a, b);
  ASSERT_EQ(ab.rows(), 8);
  ASSERT_EQ(ab.cols(), 6);
  EXPECT_EQ(ab(1 * 4 + 3, 2 * 2 + 1), a(1, 2) * b(3, 1));
}

TEST(Kron, NormIsMultiplicative) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = testutil::random_matrix(3, 2, rng), b = testutil::random_matrix(2, 4, rng);
    const double want = testutil::eig_norm(a) * testutil::eig_norm(b);
    EXPECT_NEAR(operator_norm(linalg::kron(a, b)), want, 1e-10 * want);
  }
}

TEST(Kron, ElementaryMatrices) {
  const ComplexMatrix e = linalg::elementary(2, 2, 0, 0);
  const ComplexMatrix k = linalg::kron(e, e);
  EXPECT_EQ(k.cwiseAbs().sum(), 1.0);
  EXPECT_EQ(k(0, 0), Complex(1.0));
}

TEST(DirectSum, BlockDiagonal) {
  const ComplexMatrix d = linalg::direct_sum(ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(1, 1));
  ComplexMatrix want = ComplexMatrix::Zero(3, 3);
  want(0, 0) = want(1, 1) = 1.0;
  EXPECT_EQ(d, want);
  std::mt19937_64 rng(7);
  const ComplexMatrix a = testutil::random_matrix(2, 2, rng), b = testutil::random_matrix(3, 3, rng);
  const ComplexMatrix s = linalg::direct_sum(a, b);
  EXPECT_EQ(s.rows(), 5);
  EXPECT_NEAR(operator_norm(s), std::max(operator_norm(a), operator_norm(b)), 1e-12);
}
