#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "osnorm/errors.hpp"
#include "osnorm/linalg.hpp"

namespace osnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void require_exponent(double p) {
  if (!(p >= 1.0)) throw ParameterError("exponent p must satisfy p >= 1, got " + std::to_string(p));
}

/// l_p norm of a list of moduli (or any real values, taken in absolute value).
template <class Range>
double lp_norm_of(const Range& values, double p) {
  require_exponent(p);
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

/// Finitely supported complex sequence (an element of c_00). Indices are
/// positive; stored coordinates are never exactly zero.
class FinSeq {
 public:
  using Coords = std::map<int, Complex>;

  FinSeq() = default;
  FinSeq(std::initializer_list<std::pair<const int, Complex>> init) {
    for (const auto& [i, v] : init) set(i, v);
  }

  static FinSeq basis(int i) {
    FinSeq e;
    e.set(i, 1.0);
    return e;
  }

  Complex operator[](int i) const {
    auto it = coords_.find(i);
    return it == coords_.end() ? Complex{} : it->second;
  }

  void set(int i, Complex v) {
    if (i < 1) throw DimensionError("FinSeq index must be positive, got " + std::to_string(i));
    if (v == Complex{}) coords_.erase(i);
    else coords_[i] = v;
  }

  void add(int i, Complex v) { set(i, (*this)[i] + v); }

  const Coords& coords() const { return coords_; }
  std::size_t support_size() const { return coords_.size(); }
  bool is_zero() const { return coords_.empty(); }
  int max_index() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }

  friend FinSeq operator+(FinSeq a, const FinSeq& b) {
    for (const auto& [i, v] : b.coords_) a.add(i, v);
    return a;
  }
  friend FinSeq operator-(FinSeq a, const FinSeq& b) {
    for (const auto& [i, v] : b.coords_) a.add(i, -v);
    return a;
  }
  friend FinSeq operator*(Complex c, const FinSeq& a) {
    FinSeq out;
    for (const auto& [i, v] : a.coords_) out.set(i, c * v);
    return out;
  }
  friend bool operator==(const FinSeq&, const FinSeq&) = default;

 private:
  Coords coords_;
};

inline double lp_norm(const FinSeq& v, double p) {
  std::vector<double> mods;
  mods.reserve(v.support_size());
  for (const auto& [i, c] : v.coords()) mods.push_back(std::abs(c));
  return lp_norm_of(mods, p);
}

/// An n x n matrix with entries in c_00, stored as sum_k X_k (x) e_k.
/// Every stored component is n x n and nonzero.
class MatrixSeq {
 public:
  using Components = std::map<int, ComplexMatrix>;

  MatrixSeq() = default;
  explicit MatrixSeq(Eigen::Index n) : n_(n) {
    if (n < 0) throw DimensionError("MatrixSeq side must be nonnegative");
  }

  Eigen::Index n() const { return n_; }
  const Components& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }
  std::size_t support_size() const { return components_.size(); }
  int max_index() const { return components_.empty() ? 0 : components_.rbegin()->first; }

  std::vector<int> support() const {
    std::vector<int> ks;
    ks.reserve(components_.size());
    for (const auto& [k, x] : components_) ks.push_back(k);
    return ks;
  }

  /// Adds x to component k (accumulating), dropping it if the sum vanishes.
  void add_component(int k, const ComplexMatrix& x) {
    if (k < 1) throw DimensionError("sequence index must be positive");
    if (x.rows() != n_ || x.cols() != n_)
      throw DimensionError("component must be " + std::to_string(n_) + "x" + std::to_string(n_));
    auto it = components_.find(k);
    ComplexMatrix sum = it == components_.end() ? x : ComplexMatrix(it->second + x);
    if (sum.cwiseAbs().maxCoeff() == 0.0) {
      if (it != components_.end()) components_.erase(it);
      return;
    }
    components_[k] = std::move(sum);
  }

  ComplexMatrix component(int k) const {
    auto it = components_.find(k);
    return it == components_.end() ? ComplexMatrix(ComplexMatrix::Zero(n_, n_)) : it->second;
  }

  /// Entry (i, j), 0-based, as a sequence.
  FinSeq entry(Eigen::Index i, Eigen::Index j) const {
    FinSeq out;
    for (const auto& [k, x] : components_) out.set(k, x(i, j));
    return out;
  }

  static MatrixSeq from_entries(const std::vector<std::vector<FinSeq>>& entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    MatrixSeq m(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(entries[i].size()) != n)
        throw DimensionError("entry view must be square");
      for (Eigen::Index j = 0; j < n; ++j)
        for (const auto& [k, v] : entries[i][j].coords()) {
          ComplexMatrix e = ComplexMatrix::Zero(n, n);
          e(i, j) = v;
          m.add_component(k, e);
        }
    }
    return m;
  }

  std::vector<std::vector<FinSeq>> entries() const {
    std::vector<std::vector<FinSeq>> out(n_, std::vector<FinSeq>(n_));
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j < n_; ++j) out[i][j] = entry(i, j);
    return out;
  }

  friend bool operator==(const MatrixSeq& a, const MatrixSeq& b) {
    if (a.n_ != b.n_ || a.components_.size() != b.components_.size()) return false;
    for (const auto& [k, x] : a.components_) {
      auto it = b.components_.find(k);
      if (it == b.components_.end() || it->second != x) return false;
    }
    return true;
  }

 private:
  Eigen::Index n_ = 0;
  Components components_;
};

// ---- elementwise algebra on MatrixSeq ----

inline MatrixSeq operator+(const MatrixSeq& a, const MatrixSeq& b) {
  if (a.n() != b.n()) throw DimensionError("MatrixSeq sizes differ");
  MatrixSeq out = a;
  for (const auto& [k, x] : b.components()) out.add_component(k, x);
  return out;
}

inline MatrixSeq operator*(Complex c, const MatrixSeq& a) {
  MatrixSeq out(a.n());
  if (c == Complex{}) return out;
  for (const auto& [k, x] : a.components()) out.add_component(k, c * x);
  return out;
}

inline MatrixSeq operator-(const MatrixSeq& a, const MatrixSeq& b) { return a + Complex(-1.0) * b; }

inline MatrixSeq transpose(const MatrixSeq& a) {
  MatrixSeq out(a.n());
  for (const auto& [k, x] : a.components()) out.add_component(k, x.transpose());
  return out;
}

/// Entrywise complex conjugation.
inline MatrixSeq conj(const MatrixSeq& a) {
  MatrixSeq out(a.n());
  for (const auto& [k, x] : a.components()) out.add_component(k, x.conjugate());
  return out;
}

inline MatrixSeq direct_sum(const MatrixSeq& a, const MatrixSeq& b) {
  MatrixSeq out(a.n() + b.n());
  for (const auto& [k, x] : a.components())
    out.add_component(k, linalg::direct_sum(x, b.component(k)));
  for (const auto& [k, y] : b.components())
    if (!a.components().count(k)) out.add_component(k, linalg::direct_sum(a.component(k), y));
  return out;
}

/// alpha * v * beta with scalar alpha (m x n) and beta (n x m); the result
/// must be square.
inline MatrixSeq compress(const ComplexMatrix& alpha, const MatrixSeq& v, const ComplexMatrix& beta) {
  if (alpha.cols() != v.n() || beta.rows() != v.n() || alpha.rows() != beta.cols())
    throw DimensionError("compress: incompatible shapes");
  MatrixSeq out(alpha.rows());
  for (const auto& [k, x] : v.components()) out.add_component(k, alpha * x * beta);
  return out;
}

/// Relabels sequence indices: component k moves to perm(k).
template <class Map>
MatrixSeq relabel(const MatrixSeq& a, Map&& perm) {
  MatrixSeq out(a.n());
  for (const auto& [k, x] : a.components()) out.add_component(perm(k), x);
  return out;
}

/// Matrix product over the pointwise algebra of sequences:
/// (ab)_{ik} = sum_j a_{ij} . b_{jk} with e_s . e_t = delta_{st} e_s.
inline MatrixSeq product(const MatrixSeq& a, const MatrixSeq& b) {
  if (a.n() != b.n()) throw DimensionError("product: sizes differ");
  MatrixSeq out(a.n());
  for (const auto& [k, x] : a.components()) {
    auto it = b.components().find(k);
    if (it != b.components().end()) out.add_component(k, x * it->second);
  }
  return out;
}

/// Single-entry element v placed at (i, j) of an n x n matrix.
inline MatrixSeq single_entry(Eigen::Index n, Eigen::Index i, Eigen::Index j, const FinSeq& v) {
  MatrixSeq out(n);
  for (const auto& [k, c] : v.coords()) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, j) = c;
    out.add_component(k, e);
  }
  return out;
}

// ---- witnesses ----

enum class WitnessKind { XN, XN_TRANSPOSE, YN, AN, UN };

inline constexpr int kMaxRademacherOrder = 20;

/// n x n matrix with first row (e_1 ... e_n), zero elsewhere.
inline MatrixSeq x_witness(int n) {
  if (n < 1) throw ParameterError("witness order must be >= 1");
  MatrixSeq x(n);
  for (int k = 1; k <= n; ++k) x.add_component(k, linalg::elementary(n, n, 0, k - 1));
  return x;
}

inline MatrixSeq x_witness_transpose(int n) { return transpose(x_witness(n)); }

/// n x n matrix with entry (i, j) = e_{(i-1)n + j}, row-major.
inline MatrixSeq y_witness(int n) {
  if (n < 1) throw ParameterError("witness order must be >= 1");
  MatrixSeq y(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y.add_component(i * n + j + 1, linalg::elementary(n, n, i, j));
  return y;
}

/// The 2^{n-1} x n sign matrix: A_1 = (1), A_{n+1} = [1 A_n; 1 -A_n].
inline ComplexMatrix a_witness(int n) {
  if (n < 1) throw ParameterError("witness order must be >= 1");
  if (n > kMaxRademacherOrder)
    throw SizeError("A_n has 2^(n-1) rows; n is capped at " + std::to_string(kMaxRademacherOrder));
  ComplexMatrix a = ComplexMatrix::Ones(1, 1);
  for (int m = 1; m < n; ++m) {
    const Eigen::Index r = a.rows();
    ComplexMatrix next(2 * r, m + 1);
    next.col(0).setOnes();
    next.block(0, 1, r, m) = a;
    next.block(r, 1, r, m) = -a;
    a = std::move(next);
  }
  return a;
}

/// u_n = e_1 + ... + e_n.
inline FinSeq u_witness(int n) {
  if (n < 1) throw ParameterError("witness order must be >= 1");
  FinSeq u;
  for (int k = 1; k <= n; ++k) u.set(k, 1.0);
  return u;
}

using WitnessValue = std::variant<MatrixSeq, ComplexMatrix, FinSeq>;

inline WitnessValue witness(WitnessKind kind, int n) {
  switch (kind) {
    case WitnessKind::XN: return x_witness(n);
    case WitnessKind::XN_TRANSPOSE: return x_witness_transpose(n);
    case WitnessKind::YN: return y_witness(n);
    case WitnessKind::AN: return a_witness(n);
    case WitnessKind::UN: return u_witness(n);
  }
  throw UsageError("unknown witness kind");
}

} // namespace osnorm
