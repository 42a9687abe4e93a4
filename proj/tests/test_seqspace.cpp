#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <variant>

#include "osnorm/errors.hpp"
#include "osnorm/linalg.hpp"
#include "osnorm/seqspace.hpp"
#include "test_util.hpp"

using namespace osnorm;

TEST(LpNorm, Examples) {
  const FinSeq two = FinSeq::basis(1) + FinSeq::basis(2);
  EXPECT_NEAR(lp_norm(two, 2.0), std::sqrt(2.0), 1e-15);
  const FinSeq four = two + FinSeq::basis(3) + FinSeq::basis(4);
  EXPECT_NEAR(lp_norm(four, 1.0), 4.0, 1e-15);
  EXPECT_NEAR(lp_norm(four, kInf), 1.0, 1e-15);
}

TEST(LpNorm, SignVectors) {
  for (int n = 1; n <= 8; ++n)
    for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0}) {
      FinSeq v;
      for (int l = 1; l <= n; ++l) v.set(l, (l % 2) ? 1.0 : -1.0);
      EXPECT_NEAR(lp_norm(v, p), std::pow(n, 1.0 / p), 1e-12);
    }
}

TEST(LpNorm, RejectsSmallExponent) {
  EXPECT_THROW(lp_norm(FinSeq::basis(1), 0.5), ParameterError);
}

TEST(FinSeq, CanonicalDropsZeros) {
  FinSeq v = FinSeq::basis(3);
  v.add(3, -1.0);
  EXPECT_TRUE(v.is_zero());
  EXPECT_EQ(v.support_size(), 0u);
  v.set(2, 0.0);
  EXPECT_TRUE(v.coords().empty());
}

TEST(Witness, RademacherTwo) {
  const ComplexMatrix a = a_witness(2);
  ComplexMatrix want(2, 2);
  want << 1.0, 1.0, 1.0, -1.0;
  EXPECT_EQ(a, want);
}

TEST(Witness, RademacherOrthogonalColumns) {
  for (int n = 1; n <= 12; ++n) {
    const ComplexMatrix a = a_witness(n);
    ASSERT_EQ(a.rows(), 1 << (n - 1));
    ASSERT_EQ(a.cols(), n);
    const ComplexMatrix g = a.adjoint() * a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) EXPECT_LT(std::abs(g(i, j)), 1e-12);
    EXPECT_NEAR(linalg::operator_norm(a), std::pow(2.0, (n - 1) / 2.0), 1e-9);
  }
}

TEST(Witness, RademacherSizeCap) {
  EXPECT_THROW(a_witness(21), SizeError);
  EXPECT_THROW(witness(WitnessKind::AN, 21), SizeError);
}

TEST(Witness, XnComponents) {
  const MatrixSeq x = x_witness(3);
  ASSERT_EQ(x.support_size(), 3u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(x.component(k), linalg::elementary(3, 3, 0, k - 1));
  for (int n = 1; n <= 6; ++n) {
    const MatrixSeq xn = x_witness(n);
    EXPECT_EQ(xn.support_size(), static_cast<std::size_t>(n));
    for (const auto& [k, m] : xn.components()) EXPECT_NEAR(linalg::operator_norm(m), 1.0, 1e-15);
  }
}

TEST(Witness, YnRowMajor) {
  const MatrixSeq y = y_witness(2);
  EXPECT_EQ(y.entry(0, 0), FinSeq::basis(1));
  EXPECT_EQ(y.entry(0, 1), FinSeq::basis(2));
  EXPECT_EQ(y.entry(1, 0), FinSeq::basis(3));
  EXPECT_EQ(y.entry(1, 1), FinSeq::basis(4));
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(y_witness(n).support_size(), static_cast<std::size_t>(n * n));
}

TEST(Witness, Dispatch) {
  EXPECT_TRUE(std::holds_alternative<MatrixSeq>(witness(WitnessKind::XN, 2)));
  EXPECT_EQ(std::get<MatrixSeq>(witness(WitnessKind::XN_TRANSPOSE, 3)), transpose(x_witness(3)));
  EXPECT_TRUE(std::holds_alternative<ComplexMatrix>(witness(WitnessKind::AN, 3)));
  const FinSeq u = std::get<FinSeq>(witness(WitnessKind::UN, 4));
  EXPECT_NEAR(lp_norm(u, 2.0), 2.0, 1e-15);
  EXPECT_THROW(witness(WitnessKind::XN, 0), Error);
}

TEST(MatrixSeq, EntryRoundTrip) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    const MatrixSeq x = testutil::random_seq(1 + t, 1 + t, rng);
    EXPECT_EQ(MatrixSeq::from_entries(x.entries()), x);
    for (const auto& [k, m] : x.components())
      for (Eigen::Index i = 0; i < x.n(); ++i)
        for (Eigen::Index j = 0; j < x.n(); ++j) EXPECT_EQ(x.entry(i, j)[k], m(i, j));
  }
}

TEST(MatrixSeq, ShapeChecked) {
  MatrixSeq x(2);
  EXPECT_THROW(x.add_component(1, ComplexMatrix::Zero(3, 3)), DimensionError);
  x.add_component(1, ComplexMatrix::Zero(2, 2));
  EXPECT_TRUE(x.is_zero());
}

TEST(MatrixSeq, ProductOfWitnessAndTranspose) {
  for (int n = 1; n <= 6; ++n) {
    const MatrixSeq p = product(x_witness(n), transpose(x_witness(n)));
    EXPECT_EQ(p, single_entry(n, 0, 0, u_witness(n)));
  }
}

TEST(MatrixSeq, DirectSumAndCompress) {
  const MatrixSeq s = direct_sum(x_witness(2), x_witness(3));
  EXPECT_EQ(s.n(), 5);
  EXPECT_EQ(s.entry(2, 4), FinSeq::basis(3));
  const ComplexMatrix alpha = ComplexMatrix::Identity(2, 3), beta = ComplexMatrix::Identity(3, 2);
  const MatrixSeq c = compress(alpha, x_witness(3), beta);
  EXPECT_EQ(c.n(), 2);
  EXPECT_EQ(c.support_size(), 2u);
  EXPECT_THROW(compress(alpha, x_witness(2), beta), DimensionError);
}
