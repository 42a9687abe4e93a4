#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "osnorm/evaluators.hpp"
#include "osnorm/interp.hpp"
#include "osnorm/ruan.hpp"
#include "osnorm/structure.hpp"
#include "test_util.hpp"

using namespace osnorm;

namespace {

MatrixSeq e11() { return single_entry(1, 0, 0, FinSeq::basis(1)); }

std::vector<Structure> sample_structures() {
  return {Structure::min(1.0),
          Structure::max(4.0),
          Structure::row(),
          Structure::col(),
          Structure::oh(),
          Structure::min(kInf),
          Structure::interp(Structure::min(2.0), Structure::max(4.0 / 3.0), 0.25),
          Structure::interp(Structure::row(), Structure::interp(Structure::oh(), Structure::max(2.0), 0.5), 0.75)};
}

} // namespace

TEST(Structure, DualIsInvolution) {
  for (const auto& s : sample_structures()) EXPECT_EQ(s.dual().dual(), s) << s.to_string();
  EXPECT_EQ(Structure::min(4.0).dual(), Structure::max(4.0 / 3.0));
  EXPECT_EQ(Structure::max(1.0).dual(), Structure::min(kInf));
  EXPECT_EQ(Structure::row().dual(), Structure::col());
  EXPECT_EQ(Structure::oh().dual(), Structure::oh());
}

TEST(Structure, ParseRoundTrip) {
  for (const auto& s : sample_structures()) EXPECT_EQ(parse_structure(s.to_string()), s) << s.to_string();
  const Structure s = parse_structure("interp:(min:p=2,max:p=2,theta=0.5)");
  EXPECT_EQ(s, Structure::interp(Structure::min(2.0), Structure::max(2.0), 0.5));
  EXPECT_EQ(parse_structure("max:p=4/3"), Structure::max(4.0 / 3.0));
  EXPECT_EQ(parse_structure("min:p=inf"), Structure::min(kInf));
}

TEST(Structure, RejectsBadInput) {
  EXPECT_THROW(parse_structure("min"), UsageError);
  EXPECT_THROW(parse_structure("oh extra"), UsageError);
  EXPECT_THROW(parse_structure("interp:(row,col,theta=1)"), ParameterError);
  EXPECT_THROW(Structure::min(0.5), ParameterError);
}

TEST(EvalExact, WitnessValues) {
  EXPECT_NEAR(eval_exact(Structure::row(), x_witness(4)), 2.0, 1e-12);
  EXPECT_NEAR(eval_exact(Structure::oh(), x_witness(4)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(eval_exact(Structure::oh(), y_witness(3)), std::sqrt(3.0), 1e-12);
  for (int n = 2; n <= 6; ++n) EXPECT_NEAR(eval_exact(Structure::col(), x_witness(n)), 1.0, 1e-12);
}

TEST(EvalExact, RejectsIntervalStructures) {
  EXPECT_THROW(eval_exact(Structure::min(2.0), x_witness(2)), UsageError);
}

TEST(EvalExact, OhSquareIsKroneckerNorm) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const MatrixSeq x = testutil::random_seq(1 + t % 3, 1 + t, rng);
    ComplexMatrix sum = ComplexMatrix::Zero(x.n() * x.n(), x.n() * x.n());
    for (const auto& [k, m] : x.components()) sum += linalg::kron(m, m.conjugate());
    const double oh = eval_exact(Structure::oh(), x);
    EXPECT_NEAR(oh * oh, testutil::eig_norm(sum), 1e-9 * oh * oh);
  }
}

TEST(EvalExact, PermutationInvariance) {
  std::mt19937_64 rng(22);
  const MatrixSeq x = testutil::random_seq(3, 4, rng);
  const MatrixSeq y = relabel(x, [](int k) { return 5 - k; });
  for (const auto& s : {Structure::row(), Structure::col(), Structure::oh()})
    EXPECT_NEAR(eval_exact(s, x), eval_exact(s, y), 1e-9);
  const auto a = eval_min(2.0, x), b = eval_min(2.0, y);
  EXPECT_LE(a.lower, b.upper * (1 + 1e-9));
  EXPECT_LE(b.lower, a.upper * (1 + 1e-9));
  const auto c = eval_max(2.0, x), d = eval_max(2.0, y);
  EXPECT_LE(c.lower, d.upper * (1 + 1e-9));
  EXPECT_LE(d.lower, c.upper * (1 + 1e-9));
}

TEST(EvalMin, WitnessValues) {
  EXPECT_NEAR(eval_min(2.0, x_witness(5)).lower, 1.0, 0.02);
  EXPECT_NEAR(eval_min(1.0, x_witness(4)).lower, 2.0, 0.04);
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    const auto e = eval_min(p, e11());
    EXPECT_NEAR(e.lower, 1.0, 1e-12);
    EXPECT_NEAR(e.upper, 1.0, 1e-12);
  }
  EXPECT_THROW(eval_min(0.9, e11()), ParameterError);
}

TEST(EvalMin, BilinearOracle) {
  // For x^n the bilinear form is |lambda_1| ||mu||_p, maximized at lambda = e_1
  // and mu uniform (p <= 2) or mu = e_1 (p >= 2).
  for (int n = 1; n <= 6; ++n)
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double want = p <= 2.0 ? std::pow(n, 1.0 / p) / std::sqrt(double(n)) : 1.0;
      const auto e = eval_min(p, x_witness(n));
      EXPECT_LE(e.lower, want * (1 + 1e-6));
      EXPECT_GE(e.lower, want * 0.98);
      EXPECT_GE(e.upper, want * (1 - 1e-9));
    }
}

TEST(EvalMax, WitnessValues) {
  const auto e2 = eval_max(2.0, x_witness(4));
  EXPECT_TRUE(e2.contains(2.0, 1e-9));
  EXPECT_LE(e2.gap(), 1e-6);
  const auto e4 = eval_max(4.0, x_witness(4));
  EXPECT_TRUE(e4.contains(std::sqrt(2.0), 1e-9));
  EXPECT_LE(e4.gap(), 0.02 * std::sqrt(2.0));
  EXPECT_TRUE(eval_max(2.0, y_witness(3)).contains(3.0, 1e-9));
  for (double p : {1.0, 2.0, 4.0}) {
    const auto e = eval_max(p, e11());
    EXPECT_NEAR(e.lower, 1.0, 1e-12);
    EXPECT_NEAR(e.upper, 1.0, 1e-12);
  }
}

TEST(EvalMax, FactorizationsReconstruct) {
  std::mt19937_64 rng(23);
  const MatrixSeq x = testutil::random_seq(3, 3, rng);
  for (const auto& f : {entrywise_factorization(x), polar_factorization(x)}) {
    const MatrixSeq back = f.reconstruct(x.n());
    for (const auto& [k, m] : x.components()) EXPECT_TRUE(back.component(k).isApprox(m, 1e-10));
  }
  const auto r = rademacher_factorization(x_witness(4));
  ASSERT_FALSE(r.method.empty());
  EXPECT_EQ(r.reconstruct(4), x_witness(4));
  EXPECT_NEAR(r.value(4.0), std::pow(4.0, 0.25), 1e-12);
}

TEST(Pairing, Witnesses) {
  EXPECT_NEAR(linalg::operator_norm(pairing_amplified(x_witness(3), x_witness(3))), std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(linalg::operator_norm(pairing_amplified(y_witness(3), y_witness(3))), 3.0, 1e-12);
  MatrixSeq a(2), b(2);
  a.add_component(1, ComplexMatrix::Ones(2, 2));
  b.add_component(2, ComplexMatrix::Ones(2, 2));
  EXPECT_TRUE(pairing_amplified(a, b).isZero());
}

TEST(Ordering, MinBelowStructuresBelowMax) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 8; ++t) {
    const MatrixSeq x = testutil::random_seq(1 + t % 3, 1 + t % 4, rng);
    const auto mn = eval_min(2.0, x), mx = eval_max(2.0, x);
    EXPECT_LE(mn.lower, mx.upper * (1 + 1e-9));
    for (const auto& s : {Structure::row(), Structure::col(), Structure::oh()}) {
      const double v = eval_exact(s, x);
      EXPECT_GE(v, mn.lower * (1 - 1e-9));
      EXPECT_LE(v, mx.upper * (1 + 1e-9));
    }
  }
}

TEST(Ordering, IntervalsAndEntrySandwich) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 6; ++t) {
    const MatrixSeq x = testutil::random_seq(1 + t % 3, 1 + t % 3, rng);
    for (const auto& s : sample_structures()) {
      const auto e = evaluate(s, x);
      EXPECT_LE(e.lower, e.upper + 1e-9 * std::max(1.0, e.upper)) << s.to_string();
      EXPECT_TRUE(entry_sandwich_holds(s, x, e)) << s.to_string();
    }
  }
}

TEST(Homogeneity, ScalarMultiples) {
  std::mt19937_64 rng(26);
  const MatrixSeq x = testutil::random_seq(2, 3, rng);
  const Complex c(-1.5, 2.0);
  for (const auto& s : {Structure::row(), Structure::col(), Structure::oh()})
    EXPECT_NEAR(eval_exact(s, c * x), std::abs(c) * eval_exact(s, x), 1e-12);
  EXPECT_NEAR(min_upper(2.0, c * x).upper, std::abs(c) * min_upper(2.0, x).upper, 1e-12);
}

TEST(EvalInterp, WitnessValues) {
  const auto a = eval_interp(Structure::interp(Structure::min(2.0), Structure::max(2.0), 0.5), x_witness(4));
  EXPECT_TRUE(a.contains(std::pow(4.0, 0.25), 1e-9));
  EXPECT_LE(a.gap(), 0.02 * std::pow(4.0, 0.25));
  const auto b = eval_interp(Structure::interp(Structure::min(4.0 / 3.0), Structure::max(4.0 / 3.0), 0.5), x_witness(4));
  EXPECT_TRUE(b.contains(std::pow(4.0, 3.0 / 8.0), 1e-9));
  const auto c = eval_interp(Structure::interp(Structure::row(), Structure::col(), 0.5), x_witness(4));
  EXPECT_TRUE(c.contains(std::sqrt(2.0), 1e-9));
  for (double t : {0.1, 0.5, 0.9}) {
    const auto d = eval_interp(Structure::interp(Structure::min(3.0), Structure::max(1.5), t), e11());
    EXPECT_NEAR(d.lower, 1.0, 1e-6);
    EXPECT_NEAR(d.upper, 1.0, 1e-6);
  }
  EXPECT_THROW(eval_interp(Structure::oh(), e11()), UsageError);
}

TEST(Ruan, DirectSumTakesMaximum) {
  const double v = eval_exact(Structure::oh(), direct_sum(x_witness(2), x_witness(3)));
  EXPECT_NEAR(v, std::pow(3.0, 0.25), 1e-12);
}

TEST(Ruan, RowHasNoViolations) {
  const auto rep = check_ruan(Structure::row(), 100, 7);
  EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
  EXPECT_EQ(rep.samples, 100);
}

TEST(Ruan, IntervalStructures) {
  for (const auto& s : {Structure::min(2.0), Structure::max(4.0),
                        Structure::interp(Structure::row(), Structure::col(), 0.5)}) {
    const auto rep = check_ruan(s, 10, 3);
    EXPECT_TRUE(rep.ok()) << s.to_string();
  }
}
