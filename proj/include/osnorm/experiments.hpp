#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "osnorm/errors.hpp"
#include "osnorm/evaluators.hpp"
#include "osnorm/format.hpp"
#include "osnorm/interp.hpp"
#include "osnorm/parallel.hpp"
#include "osnorm/seqspace.hpp"
#include "osnorm/structure.hpp"

namespace osnorm::experiments {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline constexpr int kMaxOptimizationN = 8;
inline constexpr int kMaxClosedFormN = 64;
inline constexpr int kMaxPairingYN = 6;

/// Closed forms for the witnesses; every function is a direct formula
/// verbatim and never calls an evaluator.
namespace closed_form {

inline double analytic_beta(double theta) { return 2.0 * std::sin(std::numbers::pi * theta) / std::numbers::pi; }

inline double min_xn(int n, double p) { return p <= 2.0 ? std::pow(n, 1.0 / p - 0.5) : 1.0; }
inline double max_xn(int n, double p) { return p <= 2.0 ? std::sqrt(double(n)) : std::pow(n, 1.0 / p); }

inline double interp_xn(int n, double p, double theta) {
  return p <= 2.0 ? std::pow(n, 0.5 - (1.0 - theta) * (1.0 - 1.0 / p)) : std::pow(n, theta / p);
}

/// Exponent e with lambda_n = n^e.
inline double lambda_exponent(double p) { return p <= 2.0 ? 1.0 - 1.0 / p : 1.0 / p; }
inline double lambda_n(int n, double p) { return std::pow(n, lambda_exponent(p)); }

/// (1/4)(1 + beta log lambda_n) ||x^n||_theta.
inline double growth48(int n, double p, double theta, double beta) {
  return 0.25 * (1.0 + beta * std::log(lambda_n(n, p))) * interp_xn(n, p, theta);
}

/// (1/4)(1/c_C + beta (log n - c_T)).
inline double growth54(int n, double c_C, double c_T, double beta) {
  return 0.25 * (1.0 / c_C + beta * (std::log(double(n)) - c_T));
}

/// (1/4)(1 + beta log n).
inline double mult62_ratio(int n, double beta) { return 0.25 * (1.0 + beta * std::log(double(n))); }

} // namespace closed_form

struct ExperimentRow {
  std::string experiment;
  int n = 0;
  double p = kUndefined;
  double theta = kUndefined;
  std::string structure;
  double lower = 0.0;
  double upper = 0.0;
  double closed_form = kUndefined;
  double rel_gap = 0.0;
  std::string method;

  bool has_closed_form() const { return !std::isnan(closed_form); }
};

struct ExperimentParams {
  std::vector<int> ns;          // empty: experiment default
  std::vector<double> ps;       // empty: {1, 4/3, 2, 4}
  std::vector<double> thetas;   // empty: {1/4, 1/2, 3/4}
  std::uint64_t seed = 0;
  Budget budget{};
  int jobs = 1;
  double c_C = 1.0;
  double c_T = 1.0;
  bool derived_rows = false;    // GROWTH48: add derived_upper rows for n <= 8
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> v{"LEMMA42", "LEMMA43",  "LEMMA44",  "LEMMA45",
                                          "LEMMA53_Y", "GROWTH48", "GROWTH54", "MULT62"};
  return v;
}

namespace detail {

inline ExperimentRow make_row(const std::string& exp, int n, double p, double theta,
                              std::string structure, double lower, double upper, double cf,
                              std::string method) {
  ExperimentRow r{exp, n, p, theta, std::move(structure), lower, upper, cf, 0.0, std::move(method)};
  const double scale = std::isnan(cf) ? std::max(1.0, std::abs(upper)) : std::max(1.0, cf);
  r.rel_gap = (upper - lower) / scale;
  return r;
}

inline ExperimentRow estimate_row(const std::string& exp, int n, double p, double theta,
                                  const Structure& s, const NormEstimate& e, double cf) {
  const std::string method =
      e.lower_method == e.upper_method ? e.lower_method : e.lower_method + "|" + e.upper_method;
  return make_row(exp, n, p, theta, s.to_string(), e.lower, e.upper, cf, method);
}

inline ExperimentRow value_row(const std::string& exp, int n, double p, double theta,
                               std::string label, double v, double cf, std::string method) {
  return make_row(exp, n, p, theta, std::move(label), v, v, cf, std::move(method));
}

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

inline void check_ns(const std::vector<int>& ns, int cap, const std::string& what) {
  for (int n : ns) {
    if (n < 1) throw ParameterError("n must be positive");
    if (n > cap) throw SizeError(what + ": n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
}

// Least-squares slope of ys against xs.
inline double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = k * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (k * sxy - sx * sy) / den;
}

} // namespace detail

using detail::slope;

/// Runs a named experiment. Rows come out in generation order (n, then p,
/// then theta, then structure), which is independent of --jobs.
inline std::vector<ExperimentRow> run(const std::string& name, const ExperimentParams& params) {
  const auto& all = names();
  if (std::find(all.begin(), all.end(), name) == all.end())
    throw UsageError("unknown experiment '" + name + "'");
  const std::vector<double> ps = params.ps.empty() ? std::vector<double>{1.0, 4.0 / 3.0, 2.0, 4.0} : params.ps;
  const std::vector<double> thetas =
      params.thetas.empty() ? std::vector<double>{0.25, 0.5, 0.75} : params.thetas;
  for (double p : ps) require_exponent(p);
  for (double t : thetas) interp::require_theta(t);

  std::vector<std::function<std::vector<ExperimentRow>()>> tasks;
  if (name == "LEMMA42" || name == "LEMMA44" || name == "LEMMA45") {
    const auto ns = params.ns.empty() ? detail::range(1, 6) : params.ns;
    detail::check_ns(ns, kMaxOptimizationN, name);
    for (int n : ns)
      for (double p : ps) {
        if (name == "LEMMA45") {
          for (double t : thetas)
            tasks.push_back([=, &params, i = tasks.size()] {
              const Structure s = Structure::interp(Structure::min(p), Structure::max(p), t);
              Budget b = params.budget;
              b.seed = splitmix64(params.seed + i);
              return std::vector{detail::estimate_row(name, n, p, t, s, evaluate(s, x_witness(n), b),
                                                      closed_form::interp_xn(n, p, t))};
            });
          continue;
        }
        tasks.push_back([=, &params, i = tasks.size()] {
          const bool is_min = name == "LEMMA42";
          const Structure s = is_min ? Structure::min(p) : Structure::max(p);
          Budget b = params.budget;
          b.seed = splitmix64(params.seed + i);
          const double cf = is_min ? closed_form::min_xn(n, p) : closed_form::max_xn(n, p);
          return std::vector{detail::estimate_row(name, n, p, kUndefined, s, evaluate(s, x_witness(n), b), cf)};
        });
      }
  } else if (name == "LEMMA43") {
    const auto ns = params.ns.empty() ? detail::range(1, 12) : params.ns;
    detail::check_ns(ns, kMaxRademacherOrder, name);
    for (int n : ns)
      tasks.push_back([=] {
        const ComplexMatrix a = a_witness(n);
        const ComplexMatrix gram = a.adjoint() * a;
        double off = 0.0;
        for (Eigen::Index i = 0; i < gram.rows(); ++i)
          for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(gram(i, j)));
        const double norm = linalg::operator_norm(a);
        return std::vector{
            detail::value_row(name, n, kUndefined, kUndefined, "A_n:column-inner-product", off, 0.0, "gram"),
            detail::value_row(name, n, kUndefined, kUndefined, "A_n:operator-norm", norm,
                              std::pow(2.0, (n - 1) / 2.0), "svd")};
      });
  } else if (name == "LEMMA53_Y") {
    const auto ns = params.ns.empty() ? detail::range(1, 5) : params.ns;
    detail::check_ns(ns, kMaxPairingYN, name);
    for (int n : ns) {
      const std::pair<Structure, double> cases[] = {
          {Structure::row(), std::sqrt(double(n))}, {Structure::col(), std::sqrt(double(n))},
          {Structure::oh(), std::sqrt(double(n))},  {Structure::min(2.0), 1.0},
          {Structure::max(2.0), double(n)}};
      for (const auto& [s, cf] : cases)
        tasks.push_back([=, &params, i = tasks.size()] {
          Budget b = params.budget;
          b.seed = splitmix64(params.seed + i);
          return std::vector{detail::estimate_row(name, n, 2.0, kUndefined, s, evaluate(s, y_witness(n), b), cf)};
        });
    }
  } else if (name == "GROWTH48") {
    const auto ns = params.ns.empty() ? detail::range(2, 64) : params.ns;
    detail::check_ns(ns, kMaxClosedFormN, name);
    for (double p : ps)
      for (double t : thetas)
        tasks.push_back([=, &params] {
          std::vector<ExperimentRow> rows;
          const double beta = interp::beta_of(t), beta_cf = closed_form::analytic_beta(t);
          std::vector<double> xs, ys;
          for (int n : ns) {
            const double L = closed_form::growth48(n, p, t, beta);
            const double cf = closed_form::interp_xn(n, p, t);
            rows.push_back(detail::value_row(name, n, p, t, "L(n)", L,
                                             closed_form::growth48(n, p, t, beta_cf), "closed-form"));
            rows.push_back(detail::value_row(name, n, p, t, "L(n)/norm", L / cf,
                                             closed_form::growth48(n, p, t, beta_cf) / cf, "closed-form"));
            xs.push_back(std::log(double(n)));
            ys.push_back(L / cf);
            if (params.derived_rows && n <= kMaxOptimizationN) {
              const interp::StripGeometry geo(t);
              const auto d = interp::derived_upper(x_witness(n), MatrixSeq(n), geo, Structure::min(p),
                                                   Structure::max(p), params.budget);
              rows.push_back(detail::make_row(name, n, p, t, "derived:(x^n,0)", L, d.value, kUndefined,
                                              "sandwich-lower|" + d.method));
            }
          }
          const double s = slope(xs, ys);
          rows.push_back(detail::value_row(name, ns.empty() ? 0 : ns.back(), p, t,
                                           "slope:L(n)/norm~log(n)", s,
                                           beta_cf * closed_form::lambda_exponent(p) / 4.0, "least-squares"));
          return rows;
        });
  } else if (name == "GROWTH54") {
    const auto ns = params.ns.empty() ? detail::range(2, 64) : params.ns;
    detail::check_ns(ns, kMaxClosedFormN, name);
    if (!(params.c_C > 0.0) || params.c_T < 0.0) throw ParameterError("need c_C > 0 and c_T >= 0");
    for (int n : ns)
      tasks.push_back([=, &params] {
        const double beta = interp::beta_of(0.5);
        return std::vector{detail::value_row(
            name, n, 2.0, 0.5, "K(n)", closed_form::growth54(n, params.c_C, params.c_T, beta),
            closed_form::growth54(n, params.c_C, params.c_T, closed_form::analytic_beta(0.5)), "closed-form")};
      });
  } else if (name == "MULT62") {
    const auto ns = params.ns.empty() ? detail::range(1, 8) : params.ns;
    detail::check_ns(ns, kMaxClosedFormN, name);
    for (int n : ns)
      tasks.push_back([=] {
        std::vector<ExperimentRow> rows;
        if (n <= kMaxOptimizationN) {
          const MatrixSeq x = x_witness(n);
          const double v = oh_norm(product(x, transpose(x)));
          rows.push_back(detail::value_row(name, n, 2.0, 0.5, "oh:x_n*x_n^T", v, std::sqrt(double(n)), "oh"));
        }
        rows.push_back(detail::value_row(name, n, 2.0, 0.5, "ratio", closed_form::mult62_ratio(n, interp::beta_of(0.5)),
                                         closed_form::mult62_ratio(n, closed_form::analytic_beta(0.5)),
                                         "closed-form"));
        return rows;
      });
  }

  std::vector<std::vector<ExperimentRow>> parts(tasks.size());
  parallel_for(tasks.size(), params.jobs, [&](std::size_t i) { parts[i] = tasks[i](); });
  std::vector<ExperimentRow> rows;
  for (auto& part : parts)
    for (auto& r : part) rows.push_back(std::move(r));
  return rows;
}

inline const char* kCsvHeader = "experiment,n,p,theta,structure,lower,upper,closed_form,rel_gap,method";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) { return std::isnan(v) ? "" : format_double(v); }

} // namespace detail

/// Header plus one line per row; undefined p, theta or closed_form are empty.
inline std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += detail::csv_field(r.experiment) + "," + std::to_string(r.n) + "," + detail::csv_number(r.p) + "," +
           detail::csv_number(r.theta) + "," + detail::csv_field(r.structure) + "," +
           detail::csv_number(r.lower) + "," + detail::csv_number(r.upper) + "," +
           detail::csv_number(r.closed_form) + "," + detail::csv_number(r.rel_gap) + "," +
           detail::csv_field(r.method) + "\n";
  }
  return out;
}

/// lower <= cf (1 + tol) and upper >= cf (1 - tol); true for rows without a
/// closed form.
inline bool contains_closed_form(const ExperimentRow& r, double tol = 0.02) {
  if (!r.has_closed_form()) return true;
  const double cf = r.closed_form;
  if (cf == 0.0) return r.lower <= tol && r.upper >= -tol;
  return r.lower <= cf * (1.0 + tol) && r.upper >= cf * (1.0 - tol);
}

} // namespace osnorm::experiments
