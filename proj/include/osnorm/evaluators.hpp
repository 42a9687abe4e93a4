#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "osnorm/errors.hpp"
#include "osnorm/linalg.hpp"
#include "osnorm/seqspace.hpp"
#include "osnorm/structure.hpp"

namespace osnorm {

/// Optimizer budget shared by the interval evaluators.
struct Budget {
  int starts = 32;
  int max_iter = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

/// Certified interval [lower, upper] for a matrix norm, with the method that
/// produced each end.
struct NormEstimate {
  double lower = 0.0;
  double upper = kInf;
  std::string lower_method;
  std::string upper_method;

  double gap() const { return upper - lower; }
  bool contains(double v, double rel_tol = 0.0) const {
    const double slack = rel_tol * std::max(1.0, std::abs(v));
    return lower <= v + slack && v - slack <= upper;
  }
};

inline NormEstimate exact_estimate(double v, const std::string& method) {
  return {v, v, method, method};
}

/// splitmix64 step; used to derive independent per-task seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

inline void require_nonempty(const MatrixSeq& x) {
  if (x.n() == 0) throw DimensionError("matrix side must be positive");
}

inline ComplexVector random_complex(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

inline double vector_lp(const ComplexVector& v, double p) {
  std::vector<double> mods(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) mods[i] = std::abs(v[i]);
  return lp_norm_of(mods, p);
}

/// Unit vector f in l_q (q conjugate to p) with sum_k f_k v_k = ||v||_p.
inline ComplexVector norming_functional(const ComplexVector& v, double p) {
  const Eigen::Index d = v.size();
  ComplexVector f = ComplexVector::Zero(d);
  const double norm = vector_lp(v, p);
  if (norm == 0.0) {
    f.setOnes();
    return f / vector_lp(f, conjugate_exponent(p));
  }
  if (p == 1.0) {
    for (Eigen::Index k = 0; k < d; ++k)
      f[k] = v[k] == Complex{} ? Complex(1.0) : std::conj(v[k]) / std::abs(v[k]);
    return f;
  }
  if (std::isinf(p)) {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    f[arg] = std::conj(v[arg]) / std::abs(v[arg]);
    return f;
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const double a = std::abs(v[k]);
    if (a == 0.0) continue;
    f[k] = std::conj(v[k]) * std::pow(a / norm, p - 1.0) / a;
  }
  return f;
}

/// Components of x in support order, plus their sequence indices.
struct ComponentList {
  std::vector<int> index;
  std::vector<ComplexMatrix> mats;
};

inline ComponentList components_of(const MatrixSeq& x) {
  ComponentList out;
  for (const auto& [k, m] : x.components()) {
    out.index.push_back(k);
    out.mats.push_back(m);
  }
  return out;
}

inline ComplexMatrix combine(const ComponentList& c, const ComplexVector& f, Eigen::Index n) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < c.mats.size(); ++k) m += f[k] * c.mats[k];
  return m;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Exact structures on l_2.

inline double row_norm(const MatrixSeq& x) {
  detail::require_nonempty(x);
  ComplexMatrix s = ComplexMatrix::Zero(x.n(), x.n());
  for (const auto& [k, m] : x.components()) s += m * m.adjoint();
  return std::sqrt(linalg::operator_norm(s));
}

inline double col_norm(const MatrixSeq& x) {
  detail::require_nonempty(x);
  ComplexMatrix s = ComplexMatrix::Zero(x.n(), x.n());
  for (const auto& [k, m] : x.components()) s += m.adjoint() * m;
  return std::sqrt(linalg::operator_norm(s));
}

inline double oh_norm(const MatrixSeq& x) {
  detail::require_nonempty(x);
  ComplexMatrix s = ComplexMatrix::Zero(x.n() * x.n(), x.n() * x.n());
  for (const auto& [k, m] : x.components()) s += linalg::kron(m, m.conjugate());
  return std::sqrt(linalg::operator_norm(s));
}

/// Norm in ROW, COL or OH.
inline double eval_exact(const Structure& s, const MatrixSeq& x) {
  switch (s.kind()) {
    case Structure::Kind::Row: return row_norm(x);
    case Structure::Kind::Col: return col_norm(x);
    case Structure::Kind::OH: return oh_norm(x);
    default: throw UsageError("eval_exact: " + s.to_string() + " has no closed-form norm");
  }
}

/// The nm x nm matrix ((i,k),(j,l)) -> sum_s x_ij[s] z_kl[s]: x acting on z
/// as a matrix of functionals, bilinearly.
inline ComplexMatrix pairing_amplified(const MatrixSeq& x, const MatrixSeq& z) {
  ComplexMatrix out = ComplexMatrix::Zero(x.n() * z.n(), x.n() * z.n());
  for (const auto& [s, xs] : x.components()) {
    auto it = z.components().find(s);
    if (it != z.components().end()) out += linalg::kron(xs, it->second);
  }
  return out;
}

/// Largest and summed l_p norms of the entries: the two sides of the entry
/// sandwich every operator space norm satisfies.
struct EntryBounds {
  double max_entry = 0.0;
  double sum_entries = 0.0;
};

inline EntryBounds entry_bounds(const MatrixSeq& x, double p) {
  EntryBounds b;
  for (Eigen::Index i = 0; i < x.n(); ++i)
    for (Eigen::Index j = 0; j < x.n(); ++j) {
      const double v = lp_norm(x.entry(i, j), p);
      b.max_entry = std::max(b.max_entry, v);
      b.sum_entries += v;
    }
  return b;
}

// ---------------------------------------------------------------------------
// MIN(p)

/// Closed-form upper bound for the MIN(p) norm, the best of:
///  - l_p norm of (||X_k||)_k (Hoelder);
///  - c2 * d^{max(0, 1/p - 1/2)}, with c2 >= ||f -> sum f_k X_k : l_2 -> M_n||
///    taken as min(row, col, Hilbert-Schmidt lift) and d the support size;
///  - for p >= 2, Riesz-Thorin between the l_1 and l_2 bounds.
inline NormEstimate min_upper(double p, const MatrixSeq& x) {
  require_exponent(p);
  detail::require_nonempty(x);
  NormEstimate e;
  e.lower = 0.0;
  if (x.is_zero()) return exact_estimate(0.0, "zero");
  const auto comps = detail::components_of(x);
  const auto d = static_cast<Eigen::Index>(comps.mats.size());
  std::vector<double> norms;
  for (const auto& m : comps.mats) norms.push_back(linalg::operator_norm(m));

  e.upper = lp_norm_of(norms, p);
  e.upper_method = "holder";

  ComplexMatrix lift(x.n() * x.n(), d);
  for (Eigen::Index k = 0; k < d; ++k)
    lift.col(k) = Eigen::Map<const ComplexVector>(comps.mats[k].data(), x.n() * x.n());
  const double c2 = std::min({row_norm(x), col_norm(x), linalg::operator_norm(lift)});
  const double hilbert =
      c2 * std::pow(static_cast<double>(d), std::max(0.0, 1.0 / p - 0.5));
  if (hilbert < e.upper) {
    e.upper = hilbert;
    e.upper_method = "l2-lift";
  }
  if (p > 2.0 && !std::isinf(p)) {
    const double m1 = *std::max_element(norms.begin(), norms.end());
    const double rt = std::pow(m1, 1.0 - 2.0 / p) * std::pow(c2, 2.0 / p);
    if (rt < e.upper) {
      e.upper = rt;
      e.upper_method = "riesz-thorin";
    }
  }
  return e;
}

namespace detail {

// Alternating ascent over unit vectors (lambda, mu) of
// || sum_ij lambda_i mu_j x_ij ||_p. Each half step is the exact maximiser
// of the linearised objective on the sphere.
inline double vector_pair_search(const ComponentList& c, Eigen::Index n, double p,
                                 const Budget& budget, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(c.mats.size());
  double best = 0.0;
  for (int s = 0; s < budget.starts; ++s) {
    ComplexVector lambda, mu;
    if (s == 0) {
      lambda = ComplexVector::Ones(n);
      mu = ComplexVector::Ones(n);
    } else {
      lambda = random_complex(n, rng);
      mu = random_complex(n, rng);
    }
    lambda.normalize();
    mu.normalize();
    double prev = -1.0;
    for (int it = 0; it < budget.max_iter; ++it) {
      ComplexVector v(d);
      for (Eigen::Index k = 0; k < d; ++k) v[k] = lambda.transpose() * c.mats[k] * mu;
      const double value = vector_lp(v, p);
      best = std::max(best, value);
      if (value - prev <= budget.tol * std::max(1.0, value)) break;
      prev = value;
      const ComplexMatrix m = combine(c, norming_functional(v, p), n);
      ComplexVector ml = m * mu;
      if (ml.norm() == 0.0) break;
      lambda = ml.conjugate() / ml.norm();
      ComplexVector mr = m.transpose() * lambda;
      if (mr.norm() == 0.0) break;
      mu = mr.conjugate() / mr.norm();
    }
  }
  return best;
}

// Ascent over unit functionals f in l_q of || sum_k f_k X_k ||.
inline double functional_search(const ComponentList& c, Eigen::Index n, double p,
                                const Budget& budget, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(c.mats.size());
  const double q = conjugate_exponent(p);
  double best = 0.0;
  for (int s = 0; s < budget.starts; ++s) {
    ComplexVector f = s == 0 ? ComplexVector(ComplexVector::Ones(d)) : random_complex(d, rng);
    f /= vector_lp(f, q);
    double prev = -1.0;
    for (int it = 0; it < budget.max_iter; ++it) {
      const auto top = linalg::top_singular(combine(c, f, n));
      best = std::max(best, top.sigma);
      if (top.sigma - prev <= budget.tol * std::max(1.0, top.sigma)) break;
      prev = top.sigma;
      const ComplexVector lambda = top.left.conjugate();
      ComplexVector v(d);
      for (Eigen::Index k = 0; k < d; ++k) v[k] = lambda.transpose() * c.mats[k] * top.right;
      f = norming_functional(v, p);
    }
  }
  return best;
}

} // namespace detail

/// MIN(p) norm: lower end from two independent multi-start searches
/// (unit-vector pairs, unit functionals), upper end from min_upper.
inline NormEstimate eval_min(double p, const MatrixSeq& x, const Budget& budget = {}) {
  NormEstimate e = min_upper(p, x);
  if (x.is_zero()) return e;
  const auto comps = detail::components_of(x);
  std::mt19937_64 rng(splitmix64(budget.seed ^ 0x6d696eULL));
  const double a = detail::vector_pair_search(comps, x.n(), p, budget, rng);
  const double b = detail::functional_search(comps, x.n(), p, budget, rng);
  if (a >= b) {
    e.lower = a;
    e.lower_method = "vector-pair-search";
  } else {
    e.lower = b;
    e.lower_method = "functional-search";
  }
  // Both searches evaluate the norm at feasible points; rounding can push
  // them a hair past an exact upper bound.
  if (e.lower > e.upper && e.lower <= e.upper * (1.0 + 1e-9)) e.lower = e.upper;
  return e;
}

// ---------------------------------------------------------------------------
// MAX(p)

/// x = left * diag(d_1..d_N) * right with d_l in l_p; row l of `diag` holds
/// the coefficients of d_l over `support`.
struct Factorization {
  ComplexMatrix left;
  ComplexMatrix diag;
  ComplexMatrix right;
  std::vector<int> support;
  std::string method;

  double diag_norm(double p) const {
    double m = 0.0;
    for (Eigen::Index l = 0; l < diag.rows(); ++l)
      m = std::max(m, detail::vector_lp(diag.row(l).transpose(), p));
    return m;
  }
  double value(double p) const {
    if (diag.rows() == 0) return 0.0;
    return linalg::operator_norm(left) * diag_norm(p) * linalg::operator_norm(right);
  }
  MatrixSeq reconstruct(Eigen::Index n) const {
    MatrixSeq out(n);
    for (std::size_t s = 0; s < support.size(); ++s)
      out.add_component(support[s], left * diag.col(static_cast<Eigen::Index>(s)).asDiagonal() * right);
    return out;
  }
};

/// One diagonal slot per nonzero entry.
inline Factorization entrywise_factorization(const MatrixSeq& x) {
  const auto comps = detail::components_of(x);
  const Eigen::Index n = x.n();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> slots;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (const auto& m : comps.mats)
        if (m(i, j) != Complex{}) {
          slots.emplace_back(i, j);
          break;
        }
  const auto N = static_cast<Eigen::Index>(slots.size());
  Factorization f{ComplexMatrix::Zero(n, N), ComplexMatrix::Zero(N, comps.mats.size()),
                  ComplexMatrix::Zero(N, n), comps.index, "entrywise"};
  for (Eigen::Index l = 0; l < N; ++l) {
    const auto [i, j] = slots[l];
    f.left(i, l) = 1.0;
    f.right(l, j) = 1.0;
    for (std::size_t s = 0; s < comps.mats.size(); ++s) f.diag(l, s) = comps.mats[s](i, j);
  }
  return f;
}

/// X_k = (U_k S_k^{1/2})(S_k^{1/2} V_k^*), one diagonal slot e_k per singular
/// value.
inline Factorization polar_factorization(const MatrixSeq& x) {
  const auto comps = detail::components_of(x);
  const Eigen::Index n = x.n();
  std::vector<ComplexVector> lcols, rrows;
  std::vector<std::size_t> owner;
  for (std::size_t s = 0; s < comps.mats.size(); ++s) {
    Eigen::JacobiSVD<ComplexMatrix> svd(comps.mats[s], Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = sv(0) * 1e-14;
    for (Eigen::Index r = 0; r < sv.size(); ++r) {
      if (sv(r) <= cut) break;
      const double root = std::sqrt(sv(r));
      lcols.push_back(svd.matrixU().col(r) * root);
      rrows.push_back(svd.matrixV().col(r).conjugate() * root);
      owner.push_back(s);
    }
  }
  const auto N = static_cast<Eigen::Index>(owner.size());
  Factorization f{ComplexMatrix(n, N), ComplexMatrix::Zero(N, comps.mats.size()),
                  ComplexMatrix(N, n), comps.index, "polar"};
  for (Eigen::Index l = 0; l < N; ++l) {
    f.left.col(l) = lcols[l];
    f.right.row(l) = rrows[l].transpose();
    f.diag(l, owner[l]) = 1.0;
  }
  return f;
}

inline constexpr int kMaxRademacherFactorization = 12;

/// For x supported on a single row i0 (or column), the sign-matrix
/// factorization x = A * diag(sum_l a_il x_{i0,l}) * A_n with A holding
/// 2^{1-n} across row i0. Returns an empty method when inapplicable.
inline Factorization rademacher_factorization(const MatrixSeq& x) {
  const Eigen::Index n = x.n();
  Factorization none;
  if (x.is_zero() || n > kMaxRademacherFactorization) return none;
  const auto comps = detail::components_of(x);
  auto nonzero_rows = [&](const std::vector<ComplexMatrix>& mats) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < n; ++i)
      for (const auto& m : mats)
        if (m.row(i).cwiseAbs().maxCoeff() > 0.0) {
          rows.push_back(i);
          break;
        }
    return rows;
  };
  bool transposed = false;
  std::vector<ComplexMatrix> mats = comps.mats;
  auto rows = nonzero_rows(mats);
  if (rows.size() != 1) {
    for (auto& m : mats) m.transposeInPlace();
    rows = nonzero_rows(mats);
    transposed = true;
    if (rows.size() != 1) return none;
  }
  const Eigen::Index i0 = rows.front();
  const ComplexMatrix signs = a_witness(static_cast<int>(n));
  const Eigen::Index N = signs.rows();
  Factorization f{ComplexMatrix::Zero(n, N), ComplexMatrix::Zero(N, mats.size()), signs,
                  comps.index, "sign-matrix"};
  f.left.row(i0).setConstant(1.0 / static_cast<double>(N));
  for (std::size_t s = 0; s < mats.size(); ++s)
    f.diag.col(s) = signs * mats[s].row(i0).transpose();
  if (transposed) {
    ComplexMatrix l = f.right.transpose();
    f.right = f.left.transpose();
    f.left = std::move(l);
  }
  return f;
}

namespace detail {

// Leading singular triple through the smaller Gram matrix.
inline linalg::SingularTriple top_triple(const ComplexMatrix& m) {
  if (std::max(m.rows(), m.cols()) <= linalg::kSvdCutoff) return linalg::top_singular(m);
  const bool wide = m.rows() <= m.cols();
  const ComplexMatrix g = wide ? ComplexMatrix(m * m.adjoint()) : ComplexMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const Eigen::Index last = g.rows() - 1;
  const double sigma = std::sqrt(std::max(0.0, es.eigenvalues()(last)));
  linalg::SingularTriple t;
  t.sigma = sigma;
  if (wide) {
    t.left = es.eigenvectors().col(last);
    t.right = sigma > 0 ? ComplexVector(m.adjoint() * t.left / sigma) : ComplexVector::Zero(m.cols());
  } else {
    t.right = es.eigenvectors().col(last);
    t.left = sigma > 0 ? ComplexVector(m * t.right / sigma) : ComplexVector::Zero(m.rows());
  }
  return t;
}

} // namespace detail

/// Moves the l_p weights of the diagonal into the scalar factors so every
/// diagonal entry has unit norm, then runs gradient descent on
/// log||A S|| + log||S^{-1} B|| over positive diagonal S.
inline Factorization balance_factorization(const Factorization& f, double p, const Budget& budget) {
  if (f.diag.rows() == 0) return f;
  std::vector<Eigen::Index> keep;
  std::vector<double> w;
  for (Eigen::Index l = 0; l < f.diag.rows(); ++l) {
    const double wl = detail::vector_lp(f.diag.row(l).transpose(), p);
    if (wl > 0.0) {
      keep.push_back(l);
      w.push_back(wl);
    }
  }
  const auto N = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index n = f.left.rows();
  ComplexMatrix a(n, N), b(N, f.right.cols()), d(N, f.diag.cols());
  for (Eigen::Index l = 0; l < N; ++l) {
    const double r = std::sqrt(w[l]);
    a.col(l) = f.left.col(keep[l]) * r;
    b.row(l) = f.right.row(keep[l]) * r;
    d.row(l) = f.diag.row(keep[l]) / w[l];
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
  auto scaled = [&](const Eigen::VectorXd& uu, ComplexMatrix& as, ComplexMatrix& bs) {
    as = a * uu.array().exp().matrix().asDiagonal();
    bs = (-uu).array().exp().matrix().asDiagonal() * b;
  };
  auto objective = [&](const Eigen::VectorXd& uu) {
    ComplexMatrix as, bs;
    scaled(uu, as, bs);
    return detail::top_triple(as).sigma * detail::top_triple(bs).sigma;
  };
  double best = objective(u);
  Eigen::VectorXd best_u = u;
  double step = 0.5;
  const int iters = std::min(budget.max_iter, 300);
  for (int it = 0; it < iters && step > 1e-8; ++it) {
    ComplexMatrix as, bs;
    scaled(u, as, bs);
    const auto ta = detail::top_triple(as);
    const auto tb = detail::top_triple(bs);
    if (ta.sigma == 0.0 || tb.sigma == 0.0) break;
    Eigen::VectorXd grad(N);
    for (Eigen::Index l = 0; l < N; ++l) {
      const double ga = std::real(ta.left.dot(as.col(l)) * ta.right[l]) / ta.sigma;
      const double gb = std::real(std::conj(tb.left[l]) * (bs.row(l) * tb.right)(0)) / tb.sigma;
      grad[l] = ga - gb;
    }
    const double gn = grad.norm();
    if (gn < 1e-14) break;
    bool improved = false;
    while (step > 1e-8) {
      Eigen::VectorXd trial = u - step * grad / gn;
      const double v = objective(trial);
      if (v < best * (1.0 - 1e-15)) {
        const double gain = best - v;
        best = v;
        best_u = trial;
        u = trial;
        step *= 1.5;
        improved = true;
        if (gain <= budget.tol * best) step = 0.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  Factorization out;
  scaled(best_u, out.left, out.right);
  out.diag = d;
  out.support = f.support;
  out.method = f.method + "+balanced";
  return out;
}

/// Upper bound for MAX(p) from the best of the entrywise, polar and
/// sign-matrix factorizations, each also rebalanced numerically when
/// `optimize` is set.
inline NormEstimate max_upper(double p, const MatrixSeq& x, const Budget& budget = {},
                              bool optimize = true) {
  require_exponent(p);
  detail::require_nonempty(x);
  if (x.is_zero()) return exact_estimate(0.0, "zero");
  NormEstimate e;
  e.lower = 0.0;
  std::vector<Factorization> starts{entrywise_factorization(x), polar_factorization(x)};
  if (auto r = rademacher_factorization(x); !r.method.empty()) starts.push_back(std::move(r));
  for (const auto& f : starts) {
    const double v = f.value(p);
    if (v < e.upper) {
      e.upper = v;
      e.upper_method = f.method;
    }
    if (optimize && f.diag.rows() <= 512) {
      const auto g = balance_factorization(f, p, budget);
      const double vg = g.value(p);
      if (vg < e.upper * (1.0 - 1e-12)) {
        e.upper = vg;
        e.upper_method = g.method;
      }
    }
  }
  return e;
}

namespace detail {

inline MatrixSeq random_matrix_seq(Eigen::Index n, const std::vector<int>& support,
                                   std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixSeq z(n);
  for (int k : support) {
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
    z.add_component(k, m);
  }
  return z;
}

} // namespace detail

/// Test elements paired against x for duality lower bounds: the witnesses
/// x^m, (x^m)^T, y^m for m <= n, x and its conjugate, single-entry basis
/// elements on the support of x, and `random_count` seeded random elements
/// scaled to unit MIN(2) upper bound.
inline std::vector<MatrixSeq> pairing_pool(const MatrixSeq& x, std::uint64_t seed,
                                           int random_count = 16) {
  std::vector<MatrixSeq> pool;
  const auto n = static_cast<int>(x.n());
  for (int m = 1; m <= n; ++m) {
    pool.push_back(x_witness(m));
    if (m > 1) pool.push_back(x_witness_transpose(m));
    if (m > 1) pool.push_back(y_witness(m));
  }
  pool.push_back(x);
  pool.push_back(conj(x));
  for (int k : x.support()) pool.push_back(single_entry(1, 0, 0, FinSeq::basis(k)));
  std::mt19937_64 rng(splitmix64(seed ^ 0x706f6f6cULL));
  const auto support = x.support();
  for (int r = 0; r < random_count && !support.empty(); ++r) {
    MatrixSeq z = detail::random_matrix_seq(x.n(), support, rng);
    const double scale = min_upper(2.0, z).upper;
    pool.push_back(Complex(1.0 / scale) * z);
  }
  return pool;
}

/// Lower bound for ||x|| in the dual of a structure whose norms are bounded
/// above by `dual_upper`: max over the pool of ||<x, z>|| / dual_upper(z).
template <class DualUpper>
NormEstimate pairing_lower(const MatrixSeq& x, const std::vector<MatrixSeq>& pool,
                           DualUpper&& dual_upper) {
  NormEstimate e;
  e.lower = 0.0;
  e.lower_method = "none";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const ComplexMatrix pm = pairing_amplified(x, pool[i]);
    const double num = linalg::operator_norm(pm);
    if (num == 0.0) continue;
    const double den = dual_upper(pool[i]);
    if (!(den > 0.0) || std::isinf(den)) continue;
    if (num / den > e.lower) {
      e.lower = num / den;
      e.lower_method = "pairing[" + std::to_string(i) + "]";
    }
  }
  return e;
}

/// MAX(p) norm: upper end from factorizations, lower end from duality with
/// MIN(q) plus, for p <= 2, the ROW/COL/OH norms (all dominated by MAX(2),
/// which is dominated by MAX(p)).
inline NormEstimate eval_max(double p, const MatrixSeq& x, const Budget& budget = {}) {
  NormEstimate e = max_upper(p, x, budget);
  if (x.is_zero()) return e;
  const auto pool = pairing_pool(x, budget.seed);
  const double q = conjugate_exponent(p);
  const NormEstimate pl =
      pairing_lower(x, pool, [q](const MatrixSeq& z) { return min_upper(q, z).upper; });
  e.lower = pl.lower;
  e.lower_method = "pairing:min(q)";
  if (p <= 2.0) {
    const double r = row_norm(x), c = col_norm(x), o = oh_norm(x);
    const std::pair<double, const char*> cands[] = {{r, "row"}, {c, "col"}, {o, "oh"}};
    for (const auto& [v, name] : cands)
      if (v > e.lower) {
        e.lower = v;
        e.lower_method = std::string(name) + (p < 2.0 ? "<=max(2)" : "");
      }
    if (p < 2.0) {
      const NormEstimate p2 =
          pairing_lower(x, pool, [](const MatrixSeq& z) { return min_upper(2.0, z).upper; });
      if (p2.lower > e.lower) {
        e.lower = p2.lower;
        e.lower_method = "pairing:min(2)<=max(2)";
      }
    }
  }
  if (e.lower > e.upper && e.lower <= e.upper * (1.0 + 1e-9)) e.lower = e.upper;
  return e;
}

} // namespace osnorm
