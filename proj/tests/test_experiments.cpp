#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "osnorm/experiments.hpp"

using namespace osnorm;
using namespace osnorm::experiments;

namespace {

const ExperimentRow* find_row(const std::vector<ExperimentRow>& rows, const std::string& structure, int n,
                              double p = std::nan("")) {
  for (const auto& r : rows)
    if (r.structure == structure && r.n == n && (std::isnan(p) || r.p == p)) return &r;
  return nullptr;
}

ExperimentParams small(std::vector<int> ns, std::vector<double> ps = {}, std::vector<double> thetas = {}) {
  ExperimentParams params;
  params.ns = std::move(ns);
  params.ps = std::move(ps);
  params.thetas = std::move(thetas);
  return params;
}

} // namespace

TEST(Experiments, Lemma44Row) {
  const auto rows = run("LEMMA44", small({4}, {4.0}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].closed_form, std::sqrt(2.0), 1e-12);
  EXPECT_LE(rows[0].rel_gap, 0.02);
  EXPECT_TRUE(contains_closed_form(rows[0]));
}

TEST(Experiments, Mult62) {
  const auto rows = run("MULT62", small({4}));
  const auto* r = find_row(rows, "oh:x_n*x_n^T", 4);
  ASSERT_NE(r, nullptr);
  EXPECT_NEAR(r->lower, 2.0, 1e-9);
  const auto* ratio = find_row(rows, "ratio", 4);
  ASSERT_NE(ratio, nullptr);
  EXPECT_NEAR(ratio->lower, 0.25 * (1.0 + 2.0 / std::numbers::pi * std::log(4.0)), 1e-12);
}

TEST(Experiments, Growth48Slope) {
  const auto rows = run("GROWTH48", small({}, {2.0}, {0.5}));
  const auto* s = find_row(rows, "slope:L(n)/norm~log(n)", 64);
  ASSERT_NE(s, nullptr);
  const double target = (2.0 / std::numbers::pi) / 8.0;
  EXPECT_NEAR(s->lower, target, 0.05 * target);
  EXPECT_NEAR(s->closed_form, target, 1e-12);
}

TEST(Experiments, Growth54Increasing) {
  ExperimentParams params = small({});
  params.c_C = params.c_T = 1.0;
  const auto rows = run("GROWTH54", params);
  ASSERT_EQ(rows.size(), 63u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].lower, rows[i - 1].lower);
  params.c_C = 0.0;
  EXPECT_THROW(run("GROWTH54", params), ParameterError);
}

TEST(Experiments, Errors) {
  EXPECT_THROW(run("LEMMA99", {}), UsageError);
  EXPECT_THROW(run("LEMMA42", small({9})), SizeError);
  EXPECT_THROW(run("LEMMA53_Y", small({7})), SizeError);
  EXPECT_THROW(run("GROWTH48", small({65})), SizeError);
  EXPECT_THROW(run("LEMMA42", small({0})), ParameterError);
}

TEST(Experiments, ContainmentOnWitnessTables) {
  for (const std::string name : {"LEMMA42", "LEMMA43", "LEMMA44", "LEMMA45", "LEMMA53_Y", "MULT62"}) {
    const auto rows = run(name, small({1, 2, 3}));
    EXPECT_FALSE(rows.empty());
    for (const auto& r : rows) {
      EXPECT_TRUE(contains_closed_form(r, 0.02)) << name << " " << r.structure << " n=" << r.n;
      if (r.lower == r.upper && r.has_closed_form() && r.method != "closed-form")
        EXPECT_NEAR(r.lower, r.closed_form, 1e-9 * std::max(1.0, r.closed_form)) << name << " " << r.structure;
    }
  }
}

TEST(Experiments, ClosedFormsMatchDirectFormulas) {
  EXPECT_NEAR(closed_form::min_xn(4, 1.0), 2.0, 1e-15);
  EXPECT_EQ(closed_form::min_xn(4, 4.0), 1.0);
  EXPECT_NEAR(closed_form::max_xn(4, 4.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(closed_form::interp_xn(4, 4.0 / 3.0, 0.5), std::pow(4.0, 3.0 / 8.0), 1e-15);
  EXPECT_NEAR(closed_form::interp_xn(16, 2.0, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(closed_form::lambda_n(16, 2.0), 4.0, 1e-15);
}

TEST(Experiments, CsvHeaderAndDeterminism) {
  ExperimentParams a = small({1, 2, 3}, {2.0, 4.0}, {0.5});
  ExperimentParams b = a;
  b.jobs = 3;
  const std::string ca = to_csv(run("LEMMA45", a)), cb = to_csv(run("LEMMA45", b));
  EXPECT_EQ(ca, cb);
  EXPECT_EQ(ca.substr(0, ca.find('\n')), "experiment,n,p,theta,structure,lower,upper,closed_form,rel_gap,method");
  // Structure specs contain commas and are quoted.
  EXPECT_NE(ca.find("\"interp:(min:p=2,max:p=2,theta=0.5)\""), std::string::npos);
  std::istringstream in(ca);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 1 + 3 * 2);
}

TEST(Experiments, RoutesAgreeOnOh) {
  const Structure mid = Structure::interp(Structure::min(2.0), Structure::max(2.0), 0.5);
  for (int n = 1; n <= 6; ++n) {
    const double oh = eval_exact(Structure::oh(), x_witness(n));
    const auto e = evaluate(mid, x_witness(n));
    EXPECT_LE(e.lower, oh * 1.02);
    EXPECT_GE(e.upper, oh * 0.98);
  }
}
