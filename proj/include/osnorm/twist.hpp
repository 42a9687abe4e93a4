#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "osnorm/errors.hpp"
#include "osnorm/evaluators.hpp"
#include "osnorm/parallel.hpp"
#include "osnorm/seqspace.hpp"

namespace osnorm::twist {

inline void require_kp_exponent(double p) {
  if (!(p > 1.0) || std::isinf(p)) throw ParameterError("Kalton-Peck exponent must lie in (1, inf)");
}

/// K_p(x)_i = x_i log(|x_i| / ||x||_p), with 0 log 0 = 0.
inline FinSeq kp_map(const FinSeq& x, double p) {
  require_kp_exponent(p);
  FinSeq out;
  const double norm = lp_norm(x, p);
  for (const auto& [i, v] : x.coords()) out.set(i, v * std::log(std::abs(v) / norm));
  return out;
}

/// ||x - K_p(y)||_p + ||y||_p.
inline double kp_quasinorm(const FinSeq& x, const FinSeq& y, double p) {
  return lp_norm(x - kp_map(y, p), p) + lp_norm(y, p);
}

using SequenceMap = std::function<FinSeq(const FinSeq&)>;

inline MatrixSeq amplify(const SequenceMap& map, const MatrixSeq& m) {
  auto entries = m.entries();
  for (auto& row : entries)
    for (auto& e : row) e = map(e);
  if (entries.empty()) return MatrixSeq(m.n());
  return MatrixSeq::from_entries(entries);
}

/// Standard complex Gaussian coordinates on a random support of size <= 32
/// inside {1..64}.
inline FinSeq random_finseq(std::mt19937_64& rng, int max_support = 32, int range = 64) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> size(1, max_support), index(1, range);
  FinSeq x;
  const int s = size(rng);
  for (int k = 0; k < s; ++k) x.set(index(rng), Complex(g(rng), g(rng)));
  if (x.is_zero()) x.set(1, 1.0);
  return x;
}

struct QuasilinearReport {
  double max_ratio = 0.0;       // max ||K(x+y) - K(x) - K(y)|| / (||x|| + ||y||)
  double max_triple_ratio = 0.0;  // max ||K(z1)+K(z2)+K(z3)|| / sum ||z_i|| for z1+z2+z3 = 0
  FinSeq arg_x, arg_y;
  int samples = 0;
  std::uint64_t seed = 0;
};

inline double pair_ratio(const FinSeq& x, const FinSeq& y, double p) {
  const double den = lp_norm(x, p) + lp_norm(y, p);
  if (den == 0.0) return 0.0;
  return lp_norm(kp_map(x + y, p) - kp_map(x, p) - kp_map(y, p), p) / den;
}

/// (log 2 / p) 2^{1/p} / 2: the pair ratio of disjointly supported vectors of
/// equal norm.
inline double disjoint_pair_ratio(double p) {
  return std::log(2.0) / p * std::pow(2.0, 1.0 / p) / 2.0;
}

/// Seeded random probe of the 0-linearity constant. The first two samples are
/// deterministic: the disjoint pair (e_1, e_2) and the pair (x, x).
inline QuasilinearReport quasilinearity_probe(double p, int samples, std::uint64_t seed, int jobs = 1) {
  require_kp_exponent(p);
  QuasilinearReport rep;
  rep.seed = seed;
  rep.samples = std::max(0, samples);
  if (samples <= 0) return rep;
  struct Result {
    double pair = 0.0, triple = 0.0;
    FinSeq x, y;
  };
  std::vector<Result> results(static_cast<std::size_t>(samples));
  parallel_for(results.size(), jobs, [&](std::size_t i) {
    std::mt19937_64 rng(splitmix64(seed + i));
    Result r;
    if (i == 0) {
      r.x = FinSeq::basis(1);
      r.y = FinSeq::basis(2);
    } else if (i == 1) {
      r.x = random_finseq(rng);
      r.y = r.x;
    } else {
      r.x = random_finseq(rng);
      r.y = random_finseq(rng);
    }
    r.pair = pair_ratio(r.x, r.y, p);
    const FinSeq z1 = random_finseq(rng), z2 = random_finseq(rng);
    const FinSeq z3 = Complex(-1.0) * (z1 + z2);
    const double den = lp_norm(z1, p) + lp_norm(z2, p) + lp_norm(z3, p);
    r.triple = lp_norm(kp_map(z1, p) + kp_map(z2, p) + kp_map(z3, p), p) / den;
    results[i] = std::move(r);
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (i == 0 || r.pair > rep.max_ratio) {
      rep.max_ratio = r.pair;
      rep.arg_x = r.x;
      rep.arg_y = r.y;
    }
    rep.max_triple_ratio = std::max(rep.max_triple_ratio, r.triple);
  }
  return rep;
}

/// max over the test set of ||K(z) - L z||_p / ||z||_p. L acts on
/// span(e_1..e_N) and is extended by zero on e_i, i > N.
inline double triviality_probe(double p, const ComplexMatrix& L, const std::vector<FinSeq>& test_set) {
  require_kp_exponent(p);
  if (L.rows() != L.cols()) throw UsageError("triviality_probe: L must be square");
  const auto N = static_cast<int>(L.rows());
  double best = 0.0;
  for (const auto& z : test_set) {
    const double nz = lp_norm(z, p);
    if (nz == 0.0) continue;
    ComplexVector head = ComplexVector::Zero(N);
    for (const auto& [i, v] : z.coords())
      if (i <= N) head(i - 1) = v;
    FinSeq lz;
    if (N > 0) {
      const ComplexVector img = L * head;
      for (int i = 0; i < N; ++i) lz.set(i + 1, img(i));
    }
    best = std::max(best, lp_norm(kp_map(z, p) - lz, p) / nz);
  }
  return best;
}

/// u_n for n <= max_u, the basis vectors e_1..e_N and `random_count` seeded
/// random unit vectors.
inline std::vector<FinSeq> default_test_set(int max_u, int N, int random_count, std::uint64_t seed,
                                            double p = 2.0) {
  std::vector<FinSeq> set;
  for (int n = 1; n <= max_u; ++n) set.push_back(u_witness(n));
  for (int i = 1; i <= N; ++i) set.push_back(FinSeq::basis(i));
  for (int r = 0; r < random_count; ++r) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(r)));
    const FinSeq z = random_finseq(rng);
    set.push_back(Complex(1.0 / lp_norm(z, p)) * z);
  }
  return set;
}

/// L with L e_i = K(e_i) = 0 on the basis of span(e_1..e_N).
inline ComplexMatrix basis_interpolating_map(int N) { return ComplexMatrix::Zero(N, N); }

struct AmplifiedReport {
  double max_ratio = 0.0;         // amplified ratio
  double max_scalar_ratio = 0.0;  // scalar ratio over the same entry pairs
  int n = 0;
  int samples = 0;
};

/// Entrywise amplification of K. For random a, b in M_n(c_00) the ratio is
/// sum_ij ||D_ij||_p / (max_ij ||a_ij||_p + max_ij ||b_ij||_p) with
/// D = K(a+b) - K(a) - K(b) entrywise; by the entry sandwich this dominates
/// the matrix-level deviation and is at most n^2 times the scalar ratio.
inline AmplifiedReport amplified_probe(double p, int n, int samples, std::uint64_t seed, int jobs = 1) {
  require_kp_exponent(p);
  AmplifiedReport rep;
  rep.n = n;
  rep.samples = std::max(0, samples);
  std::vector<std::pair<double, double>> results(static_cast<std::size_t>(rep.samples));
  parallel_for(results.size(), jobs, [&](std::size_t s) {
    std::mt19937_64 rng(splitmix64(seed ^ (0x616d70ULL + s)));
    double num = 0.0, ma = 0.0, mb = 0.0, scalar = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const FinSeq a = random_finseq(rng, 8, 16), b = random_finseq(rng, 8, 16);
        num += lp_norm(kp_map(a + b, p) - kp_map(a, p) - kp_map(b, p), p);
        ma = std::max(ma, lp_norm(a, p));
        mb = std::max(mb, lp_norm(b, p));
        scalar = std::max(scalar, pair_ratio(a, b, p));
      }
    results[s] = {num / (ma + mb), scalar};
  });
  for (const auto& [r, c] : results) {
    rep.max_ratio = std::max(rep.max_ratio, r);
    rep.max_scalar_ratio = std::max(rep.max_scalar_ratio, c);
  }
  return rep;
}

} // namespace osnorm::twist
