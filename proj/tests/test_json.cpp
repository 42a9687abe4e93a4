#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "osnorm/json_io.hpp"
#include "test_util.hpp"

using namespace osnorm;

TEST(Json, MatrixSeqFormat) {
  EXPECT_EQ(json_io::to_json(x_witness(2)),
            "{\"n\": 2, \"components\": [{\"k\": 1, \"re\": [[1, 0], [0, 0]], \"im\": [[0, 0], [0, 0]]}, "
            "{\"k\": 2, \"re\": [[0, 1], [0, 0]], \"im\": [[0, 0], [0, 0]]}]}");
  EXPECT_EQ(json_io::to_json(MatrixSeq(1)), "{\"n\": 1, \"components\": []}");
}

TEST(Json, MatrixSeqRoundTrip) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 5; ++t) {
    const MatrixSeq x = testutil::random_seq(1 + t, 2, rng);
    const std::string text = json_io::to_json(x);
    const MatrixSeq back = json_io::matrix_seq_from_json(text);
    EXPECT_EQ(back, x);
    EXPECT_EQ(json_io::to_json(back), text);
  }
}

TEST(Json, MalformedInput) {
  EXPECT_THROW(json_io::matrix_seq_from_json("{not json"), UsageError);
  EXPECT_THROW(json_io::matrix_seq_from_json("{\"n\": 2}"), UsageError);
  EXPECT_THROW(json_io::matrix_seq_from_json("{\"n\": 2, \"components\": [{\"k\": 1, \"re\": [[1]]}]}"), UsageError);
  EXPECT_THROW(json_io::matrix_seq_from_json("{\"n\": 1, \"components\": [{\"k\": 0, \"re\": [[1]]}]}"), UsageError);
  EXPECT_THROW(json_io::matrix_seq_from_json("{\"n\": 1, \"components\": [{\"k\": 1, \"re\": [[\"a\"]]}]}"), UsageError);
}

TEST(Json, MissingImaginaryPartIsZero) {
  const MatrixSeq x = json_io::matrix_seq_from_json("{\"n\": 1, \"components\": [{\"k\": 3, \"re\": [[2.5]]}]}");
  EXPECT_EQ(x.component(3)(0, 0), Complex(2.5, 0.0));
}

TEST(Json, WitnessMatrixAndFinSeq) {
  EXPECT_EQ(json_io::to_json(a_witness(2)),
            "{\"rows\": 2, \"cols\": 2, \"re\": [[1, 1], [1, -1]], \"im\": [[0, 0], [0, 0]]}");
  EXPECT_EQ(json_io::to_json(u_witness(2)),
            "{\"coords\": [{\"k\": 1, \"re\": 1, \"im\": 0}, {\"k\": 2, \"re\": 1, \"im\": 0}]}");
  EXPECT_EQ(json_io::finseq_from_json(json_io::to_json(u_witness(3))), u_witness(3));
  EXPECT_EQ(json_io::finseq_from_json("[1, 0, 2]"), FinSeq::basis(1) + Complex(2.0) * FinSeq::basis(3));
}

TEST(Json, Budget) {
  const Budget b = json_io::budget_from_json("{\"starts\": 4, \"max_iter\": 50, \"tol\": 1e-8, \"seed\": 7}");
  EXPECT_EQ(b.starts, 4);
  EXPECT_EQ(b.max_iter, 50);
  EXPECT_EQ(b.tol, 1e-8);
  EXPECT_EQ(b.seed, 7u);
  EXPECT_EQ(json_io::budget_from_json("{}").starts, Budget{}.starts);
  EXPECT_THROW(json_io::budget_from_json("{\"starts\": \"many\"}"), UsageError);
  EXPECT_THROW(json_io::budget_from_json("{\"starts\": 0}"), UsageError);
}

TEST(Json, EstimateAndReport) {
  NormEstimate e{1.5, kInf, "a", "b"};
  EXPECT_EQ(json_io::to_json(e), "{\"lower\": 1.5, \"upper\": null, \"lower_method\": \"a\", \"upper_method\": \"b\"}");
  interp::ExpCandidate c;
  c.terms.push_back({0.0, x_witness(2), 0});
  c.damping = -0.05;
  const interp::GridConfig grid;
  const auto rep = interp::boundary_report(c, interp::StripGeometry(0.5), Structure::row(), Structure::col(), grid);
  const auto j = json_io::parse(json_io::to_json(rep, grid, "constant x^2"));
  EXPECT_EQ(j["path"], "line");
  EXPECT_EQ(j["grid"]["points_per_side"], 4096);
  EXPECT_NEAR(j["value"].get<double>(), std::sqrt(2.0) * std::exp(0.05 * 0.25), 1e-12);
}
