#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "osnorm/experiments.hpp"
#include "osnorm/interp.hpp"
#include "osnorm/ruan.hpp"
#include "osnorm/twist.hpp"

namespace osnorm::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  double tol = 0.02;  // relative tolerance for optimization-backed checks
  std::uint64_t seed = 0;
  int jobs = 1;
  Budget budget{};
};

namespace detail {

template <class F>
CheckResult timed(const std::string& name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r{name, true, "", 0.0};
  std::ostringstream msg;
  try {
    f(r.pass, msg);
  } catch (const std::exception& e) {
    r.pass = false;
    msg << "exception: " << e.what();
  }
  r.detail = msg.str();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline double rel_err(double v, double want) { return std::abs(v - want) / std::max(1.0, std::abs(want)); }

} // namespace detail

/// Witness norm tables: MIN, MAX, interpolation, y^n, A_n and pairings.
inline std::vector<CheckResult> lemmas(const Options& o) {
  namespace cf = experiments::closed_form;
  std::vector<CheckResult> out;
  out.push_back(detail::timed("min(p) of x^n", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 6; ++n)
      for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0}) {
        const auto e = eval_min(p, x_witness(n), o.budget);
        const double want = cf::min_xn(n, p);
        if (std::abs(e.lower - want) > o.tol * want || e.lower > want * (1 + 1e-6)) {
          ok = false;
          msg << "n=" << n << " p=" << p << " lower=" << e.lower << " want " << want << "; ";
        }
      }
  }));
  out.push_back(detail::timed("A_n columns and norm", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 12; ++n) {
      const ComplexMatrix a = a_witness(n);
      const ComplexMatrix g = a.adjoint() * a;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          if (i != j && std::abs(g(i, j)) >= 1e-12) ok = false;
      if (std::abs(linalg::operator_norm(a) - std::pow(2.0, (n - 1) / 2.0)) > 1e-9) {
        ok = false;
        msg << "norm of A_" << n << "; ";
      }
    }
  }));
  out.push_back(detail::timed("max(p) of x^n", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 6; ++n)
      for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0}) {
        const auto e = eval_max(p, x_witness(n), o.budget);
        const double want = cf::max_xn(n, p);
        const double gap_tol = p <= 2.0 ? 1e-3 : o.tol;
        if (!e.contains(want, 1e-9) || e.gap() > gap_tol * std::max(1.0, want)) {
          ok = false;
          msg << "n=" << n << " p=" << p << " [" << e.lower << ", " << e.upper << "] want " << want << "; ";
        }
      }
  }));
  out.push_back(detail::timed("interp(min, max) of x^n", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 6; ++n)
      for (double p : {4.0 / 3.0, 2.0, 4.0})
        for (double t : {0.25, 0.5, 0.75}) {
          const auto s = Structure::interp(Structure::min(p), Structure::max(p), t);
          const auto e = evaluate(s, x_witness(n), o.budget);
          const double want = cf::interp_xn(n, p, t);
          if (!e.contains(want, 1e-9) || e.gap() > o.tol * std::max(1.0, want)) {
            ok = false;
            msg << s.to_string() << " n=" << n << " [" << e.lower << ", " << e.upper << "] want " << want << "; ";
          }
        }
  }));
  out.push_back(detail::timed("norms of y^n", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 5; ++n) {
      const MatrixSeq y = y_witness(n);
      for (const auto& s : {Structure::row(), Structure::col(), Structure::oh()})
        if (std::abs(eval_exact(s, y) - std::sqrt(double(n))) > 1e-9) {
          ok = false;
          msg << s.to_string() << " n=" << n << "; ";
        }
      if (std::abs(eval_min(2.0, y, o.budget).lower - 1.0) > o.tol) {
        ok = false;
        msg << "min(2) n=" << n << "; ";
      }
      const auto e = eval_max(2.0, y, o.budget);
      if (!e.contains(n, 1e-9) || e.gap() > o.tol * n) {
        ok = false;
        msg << "max(2) n=" << n << " [" << e.lower << ", " << e.upper << "]; ";
      }
    }
  }));
  out.push_back(detail::timed("witness pairings", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 5; ++n) {
      const auto x = x_witness(n), y = y_witness(n);
      if (std::abs(linalg::operator_norm(pairing_amplified(x, x)) - std::sqrt(double(n))) > 1e-9 ||
          std::abs(linalg::operator_norm(pairing_amplified(y, y)) - n) > 1e-9) {
        ok = false;
        msg << "n=" << n << "; ";
      }
    }
  }));
  return out;
}

/// Derived-space sandwich and multiplication growth.
inline std::vector<CheckResult> growth(const Options& o) {
  namespace cf = experiments::closed_form;
  std::vector<CheckResult> out;
  out.push_back(detail::timed("derived-space sandwich", [&](bool& ok, std::ostream& msg) {
    const interp::StripGeometry geo(0.5);
    const double beta = geo.beta();
    const double h = 1e-6;
    const double numeric = 1.0 / std::abs((geo.phi(0.5 + h) - geo.phi(0.5 - h)) / (2 * h));
    if (std::abs(numeric - beta) > 1e-8) {
      ok = false;
      msg << "beta " << beta << " vs " << numeric << "; ";
    }
    double prev = -kInf;
    for (int n = 2; n <= 8; ++n) {
      const double norm = std::pow(n, 0.25);
      const double s = 1.0 + beta * std::log(std::sqrt(double(n)));
      const auto d = interp::derived_upper(x_witness(n), MatrixSeq(n), geo, Structure::min(2.0),
                                           Structure::max(2.0), o.budget);
      if (d.value > s * norm * 1.01) {
        ok = false;
        msg << "derived_upper n=" << n << " " << d.value << " > " << s * norm << "; ";
      }
      const double lower = 0.25 * s * norm;
      if (!(lower > prev)) ok = false;
      prev = lower;
    }
    std::vector<double> xs, ys;
    for (int n = 2; n <= 64; ++n) {
      xs.push_back(std::log(double(n)));
      ys.push_back(0.25 * (1.0 + beta * std::log(std::sqrt(double(n)))));
    }
    const double slope = experiments::slope(xs, ys);
    if (std::abs(slope - beta / 8.0) > 0.05 * beta / 8.0) {
      ok = false;
      msg << "slope " << slope << "; ";
    }
  }));
  out.push_back(detail::timed("multiplication growth", [&](bool& ok, std::ostream& msg) {
    for (int n = 1; n <= 8; ++n) {
      const auto x = x_witness(n);
      if (std::abs(oh_norm(product(x, transpose(x))) - std::sqrt(double(n))) > 1e-9) {
        ok = false;
        msg << "oh n=" << n << "; ";
      }
    }
    const double beta = interp::beta_of(0.5);
    for (int n = 3; n <= 1024; ++n)
      if (!(cf::mult62_ratio(n, beta) > cf::mult62_ratio(n - 1, beta))) ok = false;
    if (cf::mult62_ratio(1024, beta) - cf::mult62_ratio(2, beta) < beta * std::log(512.0) / 4.0 - 1e-9) {
      ok = false;
      msg << "ratio growth; ";
    }
  }));
  return out;
}

/// Ruan axioms, Schwarz-Pick and kernel-derivative checkers.
inline std::vector<CheckResult> ruan(const Options& o, int ruan_samples = 200, int sp_samples = 100,
                                     int ker_samples = 50) {
  std::vector<CheckResult> out;
  const Structure structures[] = {Structure::row(), Structure::col(), Structure::oh(), Structure::min(2.0),
                                  Structure::max(2.0), Structure::min(4.0), Structure::max(4.0 / 3.0)};
  for (const auto& s : structures)
    out.push_back(detail::timed("ruan " + s.to_string(), [&](bool& ok, std::ostream& msg) {
      const auto rep = check_ruan(s, ruan_samples, o.seed);
      ok = rep.ok();
      for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i) msg << rep.violations[i] << "; ";
    }));
  out.push_back(detail::timed("schwarz-pick", [&](bool& ok, std::ostream& msg) {
    for (int i = 0; i < sp_samples; ++i) {
      std::mt19937_64 rng(splitmix64(o.seed ^ (0x5350ULL + i)));
      const int n = 1 + static_cast<int>(rng() % 4);
      interp::MatrixPolynomial f;
      for (int k = 0; k <= 3; ++k) f.coeffs.push_back(osnorm::detail::random_scalar(n, n, rng));
      const interp::DiskGrid grid{10, 64, 0.95};
      const auto rep = interp::schwarz_pick_check(interp::scale_to_unit(f, grid), grid);
      if (rep.violations) {
        ok = false;
        msg << "sample " << i << " ratio " << rep.worst_ratio << "; ";
      }
    }
  }));
  out.push_back(detail::timed("kernel derivative", [&](bool& ok, std::ostream& msg) {
    const std::pair<Structure, Structure> couples[] = {{Structure::min(2.0), Structure::max(2.0)},
                                                       {Structure::row(), Structure::col()},
                                                       {Structure::min(4.0 / 3.0), Structure::max(4.0 / 3.0)}};
    for (int i = 0; i < ker_samples; ++i) {
      std::mt19937_64 rng(splitmix64(o.seed ^ (0x4b4552ULL + i)));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const auto& [s0, s1] = couples[i % 3];
      const interp::StripGeometry geo(0.15 + 0.7 * u(rng));
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 3);
      interp::ExpCandidate c;
      const double mu = 4.0 * u(rng) - 2.0;
      const bool damped = i % 2 == 1;
      c.damping = damped ? -0.05 : 0.0;
      c.terms.push_back({Complex(mu), osnorm::detail::random_sample(n, rng), 1});
      c.terms.push_back({Complex(damped ? 4.0 * u(rng) - 2.0 : mu), osnorm::detail::random_sample(n, rng), 2});
      interp::GridConfig grid;
      grid.points_per_side = 512;
      const auto rep = interp::ker_derivative_check(c, geo, s0, s1, o.budget, 1e-9, grid);
      if (!rep.holds) {
        ok = false;
        msg << "sample " << i << ": " << rep.derivative_lower << " > " << rep.bound << "; ";
      }
    }
  }));
  return out;
}

/// Kalton-Peck map identities.
inline std::vector<CheckResult> kalton_peck(const Options& o) {
  std::vector<CheckResult> out;
  out.push_back(detail::timed("kalton-peck", [&](bool& ok, std::ostream& msg) {
    for (int i = 0; i < 100; ++i) {
      std::mt19937_64 rng(splitmix64(o.seed ^ (0x4b50ULL + i)));
      std::normal_distribution<double> g;
      const FinSeq x = twist::random_finseq(rng);
      const Complex c(g(rng), g(rng));
      const FinSeq lhs = twist::kp_map(c * x, 2.0), rhs = c * twist::kp_map(x, 2.0);
      if (lp_norm(lhs - rhs, 2.0) > 1e-12 * std::max(1.0, lp_norm(rhs, 2.0))) {
        ok = false;
        msg << "homogeneity sample " << i << "; ";
      }
    }
    for (int n = 2; n <= 256; ++n) {
      const double v = twist::kp_quasinorm(FinSeq{}, u_witness(n), 2.0);
      const double want = std::sqrt(double(n)) * (1.0 + std::log(double(n)) / 2.0);
      if (std::abs(v - want) > 1e-10 * want) {
        ok = false;
        msg << "log growth n=" << n << "; ";
      }
    }
    std::vector<FinSeq> us;
    for (int n = 1; n <= 256; ++n) us.push_back(u_witness(n));
    const double t = twist::triviality_probe(2.0, ComplexMatrix::Zero(1, 1), us);
    if (std::abs(t - std::log(256.0) / 2.0) > 1e-10) {
      ok = false;
      msg << "triviality " << t << "; ";
    }
  }));
  return out;
}

/// "lemmas", "ruan", "growth" or "all".
inline std::vector<CheckResult> run_suite(const std::string& suite, const Options& o) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (suite == "lemmas" || suite == "all") append(lemmas(o));
  if (suite == "growth" || suite == "all") append(growth(o));
  if (suite == "ruan" || suite == "all") append(ruan(o));
  if (suite == "all") append(kalton_peck(o));
  if (suite != "lemmas" && suite != "growth" && suite != "ruan" && suite != "all")
    throw UsageError("unknown suite '" + suite + "'");
  return out;
}

} // namespace osnorm::verify
