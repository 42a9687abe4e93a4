#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "osnorm/errors.hpp"
#include "osnorm/evaluators.hpp"
#include "osnorm/linalg.hpp"
#include "osnorm/seqspace.hpp"
#include "osnorm/structure.hpp"

namespace osnorm {

// Full dispatch over every structure; defined at the end of this header.
NormEstimate evaluate(const Structure& s, const MatrixSeq& x, const Budget& budget = {});
double upper_bound(const Structure& s, const MatrixSeq& x, const Budget& budget = {});
double fast_upper(const Structure& s, const MatrixSeq& x);

namespace interp {

inline void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0,1)");
}

/// Conformal map of the strip {0 <= Re z <= 1} onto the unit disk sending
/// theta to 0: z -> (e^{i pi z} - e^{i pi theta}) / (e^{i pi z} - e^{-i pi theta}).
class StripGeometry {
 public:
  explicit StripGeometry(double theta) : theta_(theta) {
    require_theta(theta);
    a_ = std::exp(Complex(0.0, std::numbers::pi * theta));
  }

  double theta() const { return theta_; }

  Complex phi(Complex z) const {
    const Complex w = std::exp(Complex(0.0, std::numbers::pi) * z);
    return (w - a_) / (w - std::conj(a_));
  }

  Complex dphi(Complex z) const {
    const Complex w = std::exp(Complex(0.0, std::numbers::pi) * z);
    const Complex den = w - std::conj(a_);
    return Complex(0.0, std::numbers::pi) * w * (a_ - std::conj(a_)) / (den * den);
  }

  /// 1 / |phi'(theta)|.
  double beta() const { return 1.0 / std::abs(dphi(theta_)); }

 private:
  double theta_;
  Complex a_;
};

inline double beta_of(double theta) { return StripGeometry(theta).beta(); }

struct ExpTerm {
  Complex mu;
  MatrixSeq v;
  int power = 0;  // multiplicity of the phi(z) factor
};

/// f(z) = sum_k e^{mu_k (z - theta)} phi(z)^{power_k} g(z) v_k with the
/// Gaussian damping g(z) = exp(-damping (z - theta)^2), damping <= 0, whose
/// modulus on Re z = j is e^{damping t^2} e^{-damping (j - theta)^2}.
struct ExpCandidate {
  std::vector<ExpTerm> terms;
  double damping = 0.0;

  Eigen::Index n() const { return terms.empty() ? 0 : terms.front().v.n(); }

  Complex coefficient(std::size_t k, Complex z, const StripGeometry& g) const {
    const Complex s = z - g.theta();
    Complex c = std::exp(terms[k].mu * s);
    if (terms[k].power > 0) c *= std::pow(g.phi(z), terms[k].power);
    if (damping != 0.0) c *= std::exp(-damping * s * s);
    return c;
  }

  MatrixSeq value(Complex z, const StripGeometry& g) const {
    MatrixSeq out(n());
    for (std::size_t k = 0; k < terms.size(); ++k) out = out + coefficient(k, z, g) * terms[k].v;
    return out;
  }

  /// f'(theta); the damping factor has zero derivative at theta.
  MatrixSeq derivative_at_theta(const StripGeometry& g) const {
    MatrixSeq out(n());
    for (const auto& t : terms) {
      if (t.power == 0) out = out + t.mu * t.v;
      else if (t.power == 1) out = out + g.dphi(g.theta()) * t.v;
    }
    return out;
  }
};

/// Boundary sampling. `points_per_side` t-values per line (or points on each
/// boundary arc for undamped common-frequency candidates), clustered geometrically at
/// t = 0 and truncated where the damping envelope drops below `cutoff`.
struct GridConfig {
  int points_per_side = 4096;
  double cutoff = 1e-12;
  double cluster = 4.0;
};

using UpperEvaluator = std::function<double(const Structure&, const MatrixSeq&)>;

inline UpperEvaluator default_evaluator() {
  return [](const Structure& s, const MatrixSeq& x) { return fast_upper(s, x); };
}

struct BoundaryReport {
  double value = 0.0;
  double side[2] = {0.0, 0.0};
  std::string path;  // "zero", "invariant", "circle", "line"
  double t_max = 0.0;
  int points = 0;
};

namespace detail {

// Writes v_k = c_k * ref when every vector is a multiple of one reference.
inline bool common_direction(const std::vector<const MatrixSeq*>& vs, MatrixSeq& ref,
                             std::vector<Complex>& coef) {
  std::size_t best = 0;
  double best_norm = -1.0;
  auto fro = [](const MatrixSeq& m) {
    double s = 0.0;
    for (const auto& [k, x] : m.components()) s += x.squaredNorm();
    return s;
  };
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (double f = fro(*vs[i]); f > best_norm) {
      best_norm = f;
      best = i;
    }
  ref = *vs[best];
  coef.assign(vs.size(), Complex{});
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Complex ip{};
    for (const auto& [k, x] : vs[i]->components()) {
      auto it = ref.components().find(k);
      if (it != ref.components().end()) ip += (it->second.conjugate().cwiseProduct(x)).sum();
    }
    coef[i] = ip / best_norm;
    const double resid = fro(*vs[i] - coef[i] * ref);
    if (resid > 1e-26 * std::max(1.0, fro(*vs[i]))) return false;
  }
  return true;
}

inline std::vector<double> t_grid(double t_max, int points, double cluster) {
  std::vector<double> ts;
  const int half = std::max(1, points / 2);
  ts.push_back(0.0);
  for (int k = 1; k <= half; ++k) {
    const double s = static_cast<double>(k) / half;
    const double t = t_max * std::sinh(cluster * s) / std::sinh(cluster);
    ts.push_back(t);
    ts.push_back(-t);
  }
  return ts;
}

} // namespace detail

/// Supremum over both boundary lines of the S_j upper bound of c(j + it).
inline BoundaryReport boundary_report(const ExpCandidate& c, const StripGeometry& geo,
                                      const Structure& s0, const Structure& s1,
                                      const GridConfig& grid = {},
                                      const UpperEvaluator& eval = default_evaluator()) {
  if (c.damping > 0.0) throw ParameterError("damping must be <= 0");
  BoundaryReport rep;
  std::vector<const ExpTerm*> live;
  for (const auto& t : c.terms) {
    if (t.v.n() != c.n()) throw DimensionError("candidate terms differ in matrix side");
    if (!t.v.is_zero()) live.push_back(&t);
  }
  if (live.empty()) {
    rep.path = "zero";
    return rep;
  }
  const Structure* sides[2] = {&s0, &s1};
  const double theta = geo.theta();
  std::vector<const MatrixSeq*> vs;
  for (const auto* t : live) vs.push_back(&t->v);
  MatrixSeq ref;
  std::vector<Complex> coef;
  const bool parallel = detail::common_direction(vs, ref, coef);

  if (c.damping == 0.0) {
    const Complex mu = live.front()->mu;
    for (const auto* t : live) {
      if (t->mu.imag() != 0.0)
        throw UsageError("undamped candidate with complex exponent is unbounded on the strip");
      if (t->mu != mu)
        throw UsageError("undamped candidate with distinct exponents needs damping to truncate the grid");
    }
    // |f(j+it)| = e^{mu (j - theta)} |P(phi(j+it))| with P(w) = sum w^{p_k} v_k.
    // phi maps Re z = 1 onto the arc of angles (0, 2 pi theta) and Re z = 0
    // onto the complementary arc, so each side is a max over a closed arc.
    bool one_power = true;
    for (const auto* t : live) one_power = one_power && t->power == live.front()->power;
    for (int j = 0; j < 2; ++j) {
      const double env = std::exp(mu.real() * (j - theta));
      if (one_power) {
        MatrixSeq sum(c.n());
        for (const auto* t : live) sum = sum + t->v;
        rep.side[j] = env * (sum.is_zero() ? 0.0 : eval(*sides[j], sum));
        rep.path = "invariant";
        continue;
      }
      rep.path = "circle";
      rep.points = grid.points_per_side;
      double sup = 0.0;
      const double sref = parallel ? eval(*sides[j], ref) : 0.0;
      const double a0 = j ? 0.0 : 2.0 * std::numbers::pi * (theta - 1.0);
      const double span = 2.0 * std::numbers::pi * (j ? theta : 1.0 - theta);
      const int count = std::max(grid.points_per_side, 2);
      for (int m = 0; m < count; ++m) {
        const Complex w = std::polar(1.0, a0 + span * m / (count - 1));
        if (parallel) {
          Complex s{};
          for (std::size_t k = 0; k < live.size(); ++k) s += coef[k] * std::pow(w, live[k]->power);
          sup = std::max(sup, std::abs(s) * sref);
        } else {
          MatrixSeq val(c.n());
          for (const auto* t : live) val = val + std::pow(w, t->power) * t->v;
          if (!val.is_zero()) sup = std::max(sup, eval(*sides[j], val));
        }
      }
      rep.side[j] = env * sup;
    }
    rep.value = std::max(rep.side[0], rep.side[1]);
    return rep;
  }

  // Damped: sample t on [-T, T] where the envelope
  // exp(damping t^2 + max|Im mu| |t|) falls below the cutoff.
  double m = 0.0;
  for (const auto* t : live) m = std::max(m, std::abs(t->mu.imag()));
  const double a = -c.damping;
  const double L = -std::log(grid.cutoff);
  rep.t_max = (m + std::sqrt(m * m + 4.0 * a * L)) / (2.0 * a);
  rep.path = "line";
  const auto ts = detail::t_grid(rep.t_max, grid.points_per_side, grid.cluster);
  rep.points = static_cast<int>(ts.size());
  ExpCandidate live_c;
  live_c.damping = c.damping;
  for (const auto* t : live) live_c.terms.push_back(*t);
  for (int j = 0; j < 2; ++j) {
    const double sref = parallel ? eval(*sides[j], ref) : 0.0;
    double sup = 0.0;
    for (double t : ts) {
      const Complex z(j, t);
      if (parallel) {
        Complex s{};
        for (std::size_t k = 0; k < live.size(); ++k) s += coef[k] * live_c.coefficient(k, z, geo);
        sup = std::max(sup, std::abs(s) * sref);
      } else {
        const MatrixSeq val = live_c.value(z, geo);
        if (!val.is_zero()) sup = std::max(sup, eval(*sides[j], val));
      }
    }
    rep.side[j] = sup;
  }
  rep.value = std::max(rep.side[0], rep.side[1]);
  return rep;
}

inline double boundary_norm(const ExpCandidate& c, const StripGeometry& geo, const Structure& s0,
                            const Structure& s1, const GridConfig& grid = {},
                            const UpperEvaluator& eval = default_evaluator()) {
  return boundary_report(c, geo, s0, s1, grid, eval).value;
}

/// e^{(z - theta) log(n0/n1)} x: equal boundary values n0^{1-theta} n1^theta
/// when n0, n1 are the endpoint norms of x.
inline ExpCandidate single_exp_candidate(const MatrixSeq& x, double n0, double n1, double theta) {
  require_theta(theta);
  if (!(n0 > 0.0) || !(n1 > 0.0)) throw ParameterError("endpoint norms must be positive");
  ExpCandidate c;
  c.terms.push_back({Complex(std::log(n0 / n1)), x, 0});
  return c;
}

/// Search settings for interpolation and derived-space upper bounds.
struct InterpOptions {
  GridConfig grid{};
  double damping = -0.05;
  double exponent_bound = std::log(1e4);  // |mu| range for exponent searches
  bool search = true;
  double search_gap = 1e-3;  // skip the multi-term search below this relative gap
  int search_points = 128;   // boundary points per side during searches
  int scan_points = 33;
  int golden_iters = 60;
  int pool_random = 16;
};

namespace detail {

template <class F>
double golden_section(F&& f, double lo, double hi, int iters, double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    arg = c;
    return fc;
  }
  arg = d;
  return fd;
}

// Scan followed by golden-section refinement around the best scan point.
// `seeds` are always evaluated.
template <class F>
double minimize_1d(F&& f, double bound, int scan, int iters, const std::vector<double>& seeds,
                   double& arg) {
  double best = kInf;
  auto consider = [&](double m) {
    const double v = f(m);
    if (v < best) {
      best = v;
      arg = m;
    }
  };
  for (double s : seeds) consider(s);
  const double h = 2.0 * bound / std::max(1, scan - 1);
  double scan_best = kInf, scan_arg = 0.0;
  for (int i = 0; i < scan; ++i) {
    const double m = -bound + h * i;
    const double v = f(m);
    if (v < scan_best) {
      scan_best = v;
      scan_arg = m;
    }
    if (v < best) {
      best = v;
      arg = m;
    }
  }
  for (double centre : {scan_arg, arg}) {
    double g_arg = centre;
    const double v = golden_section(f, std::max(-bound, centre - h), std::min(bound, centre + h),
                                    iters, g_arg);
    if (v < best) {
      best = v;
      arg = g_arg;
    }
  }
  return best;
}

inline std::pair<MatrixSeq, MatrixSeq> split_support(const MatrixSeq& x) {
  const auto ks = x.support();
  MatrixSeq a(x.n()), b(x.n());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i < ks.size() / 2) a.add_component(ks[i], x.component(ks[i]));
    else b.add_component(ks[i], x.component(ks[i]));
  }
  return {a, b};
}

} // namespace detail

/// Two-term search: x split by support halves, one real exponent per half,
/// damped, exponents optimized coordinatewise by golden section. Returns
/// the boundary norm at the full grid of the best candidate found (or +inf).
inline double two_term_search(const MatrixSeq& x, const Structure& s, double seed_mu,
                              const InterpOptions& opt) {
  if (x.support_size() < 2) return kInf;
  const StripGeometry geo(s.theta());
  const auto [xa, xb] = detail::split_support(x);
  GridConfig coarse = opt.grid;
  coarse.points_per_side = opt.search_points;
  auto make = [&](double ma, double mb) {
    ExpCandidate c;
    c.damping = opt.damping;
    c.terms.push_back({Complex(ma), xa, 0});
    c.terms.push_back({Complex(mb), xb, 0});
    return c;
  };
  double ma = seed_mu, mb = seed_mu;
  for (int round = 0; round < 2; ++round) {
    double arg = ma;
    detail::minimize_1d(
        [&](double m) { return boundary_norm(make(m, mb), geo, s.first(), s.second(), coarse); },
        opt.exponent_bound, 9, opt.golden_iters / 2, {ma}, arg);
    ma = arg;
    arg = mb;
    detail::minimize_1d(
        [&](double m) { return boundary_norm(make(ma, m), geo, s.first(), s.second(), coarse); },
        opt.exponent_bound, 9, opt.golden_iters / 2, {mb}, arg);
    mb = arg;
  }
  return boundary_norm(make(ma, mb), geo, s.first(), s.second(), opt.grid);
}

} // namespace interp

/// Interpolation norm: upper end from analytic candidates with f(theta) = x
/// (the single-exponential candidate, then a damped two-term search when the
/// interval is still loose), lower end from duality against the pairing pool
/// with the dual interpolation structure.
inline NormEstimate eval_interp(const Structure& s, const MatrixSeq& x, const Budget& budget = {},
                                const interp::InterpOptions& opt = {}) {
  if (s.kind() != Structure::Kind::Interp) throw UsageError("eval_interp needs an interp structure");
  if (x.n() == 0) throw DimensionError("matrix side must be positive");
  if (x.is_zero()) return exact_estimate(0.0, "zero");
  const double theta = s.theta();
  const double n0 = upper_bound(s.first(), x, budget);
  const double n1 = upper_bound(s.second(), x, budget);
  NormEstimate e;
  e.upper = std::pow(n0, 1.0 - theta) * std::pow(n1, theta);
  e.upper_method = "single-exponential";

  const Structure d0 = s.first().dual(), d1 = s.second().dual();
  const auto pool = pairing_pool(x, budget.seed, opt.pool_random);
  const NormEstimate pl = pairing_lower(x, pool, [&](const MatrixSeq& z) {
    const double a = fast_upper(d0, z), b = fast_upper(d1, z);
    return std::pow(a, 1.0 - theta) * std::pow(b, theta);
  });
  e.lower = pl.lower;
  e.lower_method = "pairing:dual-interp";

  if (opt.search && e.upper - e.lower > opt.search_gap * std::max(1.0, e.upper) && n0 > 0 && n1 > 0) {
    const double v = interp::two_term_search(x, s, std::log(n0 / n1), opt);
    if (v < e.upper) {
      e.upper = v;
      e.upper_method = "two-term-search";
    }
  }
  if (e.lower > e.upper && e.lower <= e.upper * (1.0 + 1e-9)) e.lower = e.upper;
  return e;
}

namespace interp {

struct DerivedResult {
  double value = kInf;
  double mu = 0.0;  // exponent of the x-term
  double nu = 0.0;  // exponent of the phi-term
  std::string method;
};

/// Upper bound for ||(x, y)|| in the derived space: the smallest boundary
/// norm over f = e^{mu(z-theta)} x + phi(z) e^{nu(z-theta)} w with
/// w = (y - mu x) / phi'(theta), so f(theta) = x and f'(theta) = y. First
/// nu = mu (undamped, exact on the circle), then nu free (damped).
inline DerivedResult derived_upper(const MatrixSeq& x, const MatrixSeq& y, const StripGeometry& geo,
                                   const Structure& s0, const Structure& s1,
                                   const Budget& budget = {}, const InterpOptions& opt = {}) {
  if (x.n() != y.n()) throw DimensionError("derived_upper: x and y differ in size");
  const double theta = geo.theta();
  const Complex d = geo.dphi(theta);
  auto make = [&](double mu, double nu, double damping) {
    ExpCandidate c;
    c.damping = damping;
    c.terms.push_back({Complex(mu), x, 0});
    c.terms.push_back({Complex(nu), (1.0 / d) * (y - Complex(mu) * x), 1});
    return c;
  };
  GridConfig coarse = opt.grid;
  coarse.points_per_side = std::min(opt.grid.points_per_side, 512);

  auto seed_exponent = [&](const MatrixSeq& v) {
    if (v.is_zero()) return 0.0;
    const double a = upper_bound(s0, v, budget), b = upper_bound(s1, v, budget);
    return (a > 0 && b > 0) ? std::log(a / b) : 0.0;
  };
  const double mx = seed_exponent(x);
  std::vector<double> seeds{0.0, mx, seed_exponent(y)};
  for (double& s : seeds) s = std::clamp(s, -opt.exponent_bound, opt.exponent_bound);

  DerivedResult best;
  double arg = 0.0;
  detail::minimize_1d(
      [&](double m) { return boundary_norm(make(m, m, 0.0), geo, s0, s1, coarse); },
      opt.exponent_bound, opt.scan_points, opt.golden_iters, seeds, arg);
  best.value = boundary_norm(make(arg, arg, 0.0), geo, s0, s1, opt.grid);
  best.mu = best.nu = arg;
  best.method = "common-exponent";

  // The extremal-plus-correction construction: mu at the x extremal, nu at
  // the extremal of the correction term.
  {
    const MatrixSeq w = y - Complex(mx) * x;
    const double nu = std::clamp(seed_exponent(w), -opt.exponent_bound, opt.exponent_bound);
    const double v = nu == mx ? boundary_norm(make(mx, mx, 0.0), geo, s0, s1, opt.grid)
                              : boundary_norm(make(mx, nu, opt.damping), geo, s0, s1, opt.grid);
    if (v < best.value) best = {v, mx, nu, "extremal-correction"};
  }

  if (opt.search && !x.is_zero()) {
    GridConfig line = opt.grid;
    line.points_per_side = opt.search_points;
    double mu = best.mu, nu = best.nu;
    for (int round = 0; round < 2; ++round) {
      double a = nu;
      detail::minimize_1d(
          [&](double m) { return boundary_norm(make(mu, m, opt.damping), geo, s0, s1, line); },
          opt.exponent_bound, 9, opt.golden_iters / 2, {nu}, a);
      nu = a;
      a = mu;
      detail::minimize_1d(
          [&](double m) { return boundary_norm(make(m, nu, opt.damping), geo, s0, s1, line); },
          opt.exponent_bound, 9, opt.golden_iters / 2, {mu}, a);
      mu = a;
    }
    const double v = boundary_norm(make(mu, nu, opt.damping), geo, s0, s1, opt.grid);
    if (v < best.value) best = {v, mu, nu, "free-exponents"};
  }
  return best;
}

/// Two-sided estimate of ||(x, y)|| in the derived space given ||x|| (with an
/// extremal f, f'(theta) = y0) and ||y - y0||:
/// [(||x|| + beta ||y - y0||) / 4, ||x|| + beta ||y - y0||].
inline std::pair<double, double> derived_sandwich(double norm_x, double y_minus_y0_norm,
                                                  const StripGeometry& geo) {
  if (norm_x < 0.0 || y_minus_y0_norm < 0.0) throw ParameterError("norms must be nonnegative");
  if (norm_x == 0.0) throw UsageError("derived_sandwich requires x != 0");
  const double s = norm_x + geo.beta() * y_minus_y0_norm;
  return {0.25 * s, s};
}

/// Matrix polynomial F(z) = sum_k coeffs[k] z^k on the unit disk.
struct MatrixPolynomial {
  std::vector<ComplexMatrix> coeffs;

  ComplexMatrix operator()(Complex z) const {
    ComplexMatrix out = ComplexMatrix::Zero(coeffs.front().rows(), coeffs.front().cols());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = (out * z + *it).eval();
    return out;
  }
  ComplexMatrix derivative(Complex z) const {
    ComplexMatrix out = ComplexMatrix::Zero(coeffs.front().rows(), coeffs.front().cols());
    for (std::size_t k = coeffs.size(); k-- > 1;) out = (out * z + double(k) * coeffs[k]).eval();
    return out;
  }
};

/// Polar grid on the closed disk: `radii` interior radii in [0, max_radius]
/// plus the unit circle, `angles` points per circle.
struct DiskGrid {
  int radii = 20;
  int angles = 256;
  double max_radius = 0.95;

  std::vector<Complex> interior() const {
    std::vector<Complex> pts{Complex{}};
    for (int r = 1; r <= radii; ++r)
      for (int a = 0; a < angles; ++a)
        pts.push_back(std::polar(max_radius * r / radii, 2.0 * std::numbers::pi * a / angles));
    return pts;
  }
  std::vector<Complex> all() const {
    auto pts = interior();
    for (int a = 0; a < 4 * angles; ++a)
      pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * a / (4 * angles)));
    return pts;
  }
};

inline double grid_max(const MatrixPolynomial& f, const DiskGrid& grid) {
  double m = 0.0;
  for (Complex z : grid.all()) m = std::max(m, linalg::operator_norm(f(z)));
  return m;
}

inline MatrixPolynomial scale_to_unit(MatrixPolynomial f, const DiskGrid& grid) {
  const double m = grid_max(f, grid);
  if (m > 0.0)
    for (auto& c : f.coeffs) c /= m;
  return f;
}

struct CheckReport {
  int points = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max of lhs / rhs
};

/// ||F'(z)|| <= 1 / (1 - |z|^2) + tol at every interior grid point, for F
/// bounded by 1 on the grid.
inline CheckReport schwarz_pick_check(const MatrixPolynomial& f, const DiskGrid& grid = {},
                                      double tol = 1e-9) {
  if (f.coeffs.empty()) throw UsageError("empty polynomial");
  if (grid_max(f, grid) > 1.0 + 1e-12) throw UsageError("polynomial is not scaled to sup-norm 1");
  CheckReport rep;
  for (Complex z : grid.interior()) {
    const double lhs = linalg::operator_norm(f.derivative(z));
    const double rhs = 1.0 / (1.0 - std::norm(z));
    ++rep.points;
    rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
    if (lhs > rhs + tol) ++rep.violations;
  }
  return rep;
}

struct KerDerivativeReport {
  double derivative_lower = 0.0;  // certified lower bound of ||c'(theta)||_theta
  double derivative_upper = 0.0;
  double bound = 0.0;             // |phi'(theta)| * boundary norm of c
  bool holds = false;
};

/// For c(theta) = 0: ||c'(theta)||_theta <= |phi'(theta)| ||c||. The left side
/// is taken at the lower end of its certified interval, so a reported
/// violation is a genuine one.
inline KerDerivativeReport ker_derivative_check(const ExpCandidate& c, const StripGeometry& geo,
                                                const Structure& s0, const Structure& s1,
                                                const Budget& budget = {}, double tol = 1e-9,
                                                const GridConfig& grid = {}) {
  MatrixSeq at_theta(c.n());
  double scale = 0.0;
  for (const auto& t : c.terms) {
    if (t.power == 0) at_theta = at_theta + t.v;
    for (const auto& [k, m] : t.v.components()) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  }
  for (const auto& [k, m] : at_theta.components())
    if (m.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
      throw PreconditionError("candidate does not vanish at theta");
  KerDerivativeReport rep;
  const MatrixSeq deriv = c.derivative_at_theta(geo);
  rep.bound = std::abs(geo.dphi(geo.theta())) * boundary_norm(c, geo, s0, s1, grid);
  if (!deriv.is_zero()) {
    InterpOptions opt;
    opt.search = false;
    const auto e = eval_interp(Structure::interp(s0, s1, geo.theta()), deriv, budget, opt);
    rep.derivative_lower = e.lower;
    rep.derivative_upper = e.upper;
  }
  rep.holds = rep.derivative_lower <= rep.bound + tol * std::max(1.0, rep.bound);
  return rep;
}

} // namespace interp

// ---------------------------------------------------------------------------

inline double fast_upper(const Structure& s, const MatrixSeq& x) {
  if (x.is_zero()) return 0.0;
  switch (s.kind()) {
    case Structure::Kind::Row:
    case Structure::Kind::Col:
    case Structure::Kind::OH: return eval_exact(s, x);
    case Structure::Kind::Min: return min_upper(s.p(), x).upper;
    case Structure::Kind::Max: return max_upper(s.p(), x, {}, false).upper;
    case Structure::Kind::Interp:
      return std::pow(fast_upper(s.first(), x), 1.0 - s.theta()) *
             std::pow(fast_upper(s.second(), x), s.theta());
  }
  throw UsageError("unknown structure");
}

inline double upper_bound(const Structure& s, const MatrixSeq& x, const Budget& budget) {
  if (x.is_zero()) return 0.0;
  switch (s.kind()) {
    case Structure::Kind::Row:
    case Structure::Kind::Col:
    case Structure::Kind::OH: return eval_exact(s, x);
    case Structure::Kind::Min: return min_upper(s.p(), x).upper;
    case Structure::Kind::Max: return max_upper(s.p(), x, budget).upper;
    case Structure::Kind::Interp: {
      interp::InterpOptions opt;
      opt.search = false;
      return eval_interp(s, x, budget, opt).upper;
    }
  }
  throw UsageError("unknown structure");
}

inline NormEstimate evaluate(const Structure& s, const MatrixSeq& x, const Budget& budget) {
  switch (s.kind()) {
    case Structure::Kind::Row:
    case Structure::Kind::Col:
    case Structure::Kind::OH: return exact_estimate(eval_exact(s, x), s.to_string());
    case Structure::Kind::Min: return eval_min(s.p(), x, budget);
    case Structure::Kind::Max: return eval_max(s.p(), x, budget);
    case Structure::Kind::Interp: return eval_interp(s, x, budget);
  }
  throw UsageError("unknown structure");
}

} // namespace osnorm
