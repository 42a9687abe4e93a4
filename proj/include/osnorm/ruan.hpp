#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "osnorm/interp.hpp"

namespace osnorm {

struct RuanReport {
  int samples = 0;
  int checks = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline MatrixSeq random_sample(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 4);
  std::vector<int> support;
  for (int k = 1; k <= 6; ++k)
    if (rng() % 2 == 0) support.push_back(k);
  if (support.empty()) support.push_back(1 + static_cast<int>(rng() % 6));
  while (static_cast<int>(support.size()) > len(rng)) support.pop_back();
  return random_matrix_seq(n, support, rng);
}

inline ComplexMatrix random_scalar(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
  return m;
}

} // namespace detail

/// Entry sandwich: max entry norm <= ||x|| <= sum of entry norms, checked
/// against an interval (upper against the left side, lower against the right).
inline bool entry_sandwich_holds(const Structure& s, const MatrixSeq& x, const NormEstimate& e,
                                 double tol = 1e-9) {
  const EntryBounds b = entry_bounds(x, s.base_exponent());
  return e.upper >= b.max_entry - tol * std::max(1.0, b.max_entry) &&
         e.lower <= b.sum_entries + tol * std::max(1.0, b.sum_entries);
}

/// Randomized check of Ruan's axioms for one structure, plus the entry
/// sandwich on every evaluation. Exact structures are checked with equality
/// in O1; interval structures with interval consistency.
inline RuanReport check_ruan(const Structure& s, int samples, std::uint64_t seed, int max_n = 4,
                             const Budget& budget = {8, 200, 1e-10, 0}, double tol = 1e-9) {
  RuanReport rep;
  const bool exact = s.is_exact();
  auto fail = [&](int i, const std::string& what) {
    rep.violations.push_back(s.to_string() + " sample " + std::to_string(i) + ": " + what);
  };
  auto rel = [&](double v) { return tol * std::max(1.0, std::abs(v)); };
  for (int i = 0; i < samples; ++i) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<int> side(1, max_n);
    const Eigen::Index n1 = side(rng), n2 = side(rng);
    const MatrixSeq v = detail::random_sample(n1, rng);
    const MatrixSeq w = detail::random_sample(n2, rng);
    const Eigen::Index m = side(rng);
    const ComplexMatrix alpha = detail::random_scalar(m, n1, rng);
    const ComplexMatrix beta = detail::random_scalar(n1, m, rng);
    const MatrixSeq vw = direct_sum(v, w);
    const MatrixSeq avb = compress(alpha, v, beta);
    Budget b = budget;
    b.seed = splitmix64(seed ^ static_cast<std::uint64_t>(i));
    const NormEstimate ev = evaluate(s, v, b), ew = evaluate(s, w, b), evw = evaluate(s, vw, b),
                       eavb = evaluate(s, avb, b);
    ++rep.samples;
    const double ca = linalg::operator_norm(alpha) * linalg::operator_norm(beta);

    ++rep.checks;
    if (exact) {
      const double want = std::max(ev.lower, ew.lower);
      if (std::abs(evw.lower - want) > rel(want)) fail(i, "O1 equality");
    } else if (evw.lower > std::max(ev.upper, ew.upper) + rel(evw.lower) ||
               evw.upper < std::max(ev.lower, ew.lower) - rel(evw.upper)) {
      fail(i, "O1 containment");
    }
    ++rep.checks;
    if (eavb.lower > ca * ev.upper + rel(ca * ev.upper)) fail(i, "O2 inequality");

    const std::pair<const MatrixSeq*, const NormEstimate*> evals[] = {
        {&v, &ev}, {&w, &ew}, {&vw, &evw}, {&avb, &eavb}};
    for (const auto& [x, e] : evals) {
      rep.checks += 2;
      if (e->lower > e->upper + rel(e->upper)) fail(i, "interval inverted");
      if (!entry_sandwich_holds(s, *x, *e, tol)) fail(i, "entry sandwich");
    }
  }
  return rep;
}

} // namespace osnorm
