#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "osnorm/errors.hpp"
#include "osnorm/evaluators.hpp"
#include "osnorm/format.hpp"
#include "osnorm/interp.hpp"
#include "osnorm/seqspace.hpp"

namespace osnorm::json_io {

using json = nlohmann::json;

// Non-finite values have no JSON literal and are written as null.
inline std::string number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

inline std::string quoted(const std::string& s) { return json(s).dump(); }

namespace detail {

template <class Get>
std::string rows(Eigen::Index r, Eigen::Index c, Get&& get) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < r; ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < c; ++j) out += (j ? ", " : "") + number(get(i, j));
    out += "]";
  }
  return out + "]";
}

} // namespace detail

/// {"n": 3, "components": [{"k": 1, "re": [[...]], "im": [[...]]}, ...]}
inline std::string to_json(const MatrixSeq& x) {
  std::string out = "{\"n\": " + std::to_string(x.n()) + ", \"components\": [";
  bool first = true;
  for (const auto& [k, m] : x.components()) {
    out += first ? "" : ", ";
    first = false;
    out += "{\"k\": " + std::to_string(k) + ", \"re\": " +
           detail::rows(m.rows(), m.cols(), [&](auto i, auto j) { return m(i, j).real(); }) +
           ", \"im\": " +
           detail::rows(m.rows(), m.cols(), [&](auto i, auto j) { return m(i, j).imag(); }) + "}";
  }
  return out + "]}";
}

/// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
inline std::string to_json(const ComplexMatrix& m) {
  return "{\"rows\": " + std::to_string(m.rows()) + ", \"cols\": " + std::to_string(m.cols()) +
         ", \"re\": " + detail::rows(m.rows(), m.cols(), [&](auto i, auto j) { return m(i, j).real(); }) +
         ", \"im\": " + detail::rows(m.rows(), m.cols(), [&](auto i, auto j) { return m(i, j).imag(); }) + "}";
}

/// {"coords": [{"k": 1, "re": 0.5, "im": 0}, ...]}
inline std::string to_json(const FinSeq& x) {
  std::string out = "{\"coords\": [";
  bool first = true;
  for (const auto& [k, v] : x.coords()) {
    out += first ? "" : ", ";
    first = false;
    out += "{\"k\": " + std::to_string(k) + ", \"re\": " + number(v.real()) + ", \"im\": " +
           number(v.imag()) + "}";
  }
  return out + "]}";
}

inline std::string to_json(const NormEstimate& e) {
  return "{\"lower\": " + number(e.lower) + ", \"upper\": " + number(e.upper) +
         ", \"lower_method\": " + quoted(e.lower_method) + ", \"upper_method\": " +
         quoted(e.upper_method) + "}";
}

inline std::string to_json(const interp::BoundaryReport& r, const interp::GridConfig& g,
                           const std::string& candidate) {
  return "{\"candidate\": " + quoted(candidate) + ", \"value\": " + number(r.value) +
         ", \"side0\": " + number(r.side[0]) + ", \"side1\": " + number(r.side[1]) +
         ", \"path\": " + quoted(r.path) + ", \"grid\": {\"points_per_side\": " +
         std::to_string(g.points_per_side) + ", \"cutoff\": " + number(g.cutoff) +
         ", \"t_max\": " + number(r.t_max) + ", \"points\": " + std::to_string(r.points) + "}}";
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline double real_of(const json& v) {
  if (!v.is_number()) throw UsageError("expected a number in JSON input");
  return v.get<double>();
}

inline ComplexMatrix matrix_of(const json& re, const json* im, Eigen::Index n) {
  if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != n)
    throw UsageError("component must have " + std::to_string(n) + " rows");
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = re[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw UsageError("component must have " + std::to_string(n) + " columns");
    for (Eigen::Index j = 0; j < n; ++j) {
      double imag = 0.0;
      if (im) {
        const json& irow = (*im).at(static_cast<std::size_t>(i));
        if (!irow.is_array() || static_cast<Eigen::Index>(irow.size()) != n)
          throw UsageError("imaginary part has the wrong shape");
        imag = real_of(irow[static_cast<std::size_t>(j)]);
      }
      m(i, j) = Complex(real_of(row[static_cast<std::size_t>(j)]), imag);
    }
  }
  return m;
}

} // namespace detail

inline MatrixSeq matrix_seq_from_value(const json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("components"))
      throw UsageError("MatrixSeq JSON needs \"n\" and \"components\"");
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
      throw UsageError("\"n\" must be a nonnegative integer");
    const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());
    MatrixSeq x(n);
    if (!j["components"].is_array()) throw UsageError("\"components\" must be an array");
    for (const auto& c : j["components"]) {
      if (!c.is_object() || !c.contains("k") || !c["k"].is_number_integer() || !c.contains("re"))
        throw UsageError("component needs integer \"k\" and \"re\"");
      const json* im = c.contains("im") ? &c["im"] : nullptr;
      if (im && !im->is_array()) throw UsageError("\"im\" must be an array");
      x.add_component(c["k"].get<int>(), detail::matrix_of(c["re"], im, n));
    }
    return x;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed MatrixSeq JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw UsageError(e.what());
  }
}

inline MatrixSeq matrix_seq_from_json(const std::string& text) { return matrix_seq_from_value(parse(text)); }

/// Accepts {"coords": [{"k", "re", "im"}, ...]} or a plain array of real
/// coordinates indexed from 1.
inline FinSeq finseq_from_value(const json& j) {
  try {
    FinSeq x;
    if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) x.set(static_cast<int>(i) + 1, detail::real_of(j[i]));
      return x;
    }
    if (!j.is_object() || !j.contains("coords") || !j["coords"].is_array())
      throw UsageError("FinSeq JSON needs \"coords\"");
    for (const auto& c : j["coords"]) {
      if (!c.is_object() || !c.contains("k") || !c["k"].is_number_integer())
        throw UsageError("coordinate needs integer \"k\"");
      const int k = c["k"].get<int>();
      if (k < 1) throw UsageError("coordinate index must be positive");
      const double re = c.contains("re") ? detail::real_of(c["re"]) : 0.0;
      const double im = c.contains("im") ? detail::real_of(c["im"]) : 0.0;
      x.add(k, Complex(re, im));
    }
    return x;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed FinSeq JSON: ") + e.what());
  }
}

inline FinSeq finseq_from_json(const std::string& text) { return finseq_from_value(parse(text)); }

/// {"starts": int, "max_iter": int, "tol": float, "seed": int}; missing keys
/// keep their defaults.
inline Budget budget_from_value(const json& j) {
  if (!j.is_object()) throw UsageError("budget JSON must be an object");
  Budget b;
  try {
    if (j.contains("starts")) b.starts = j["starts"].get<int>();
    if (j.contains("max_iter")) b.max_iter = j["max_iter"].get<int>();
    if (j.contains("tol")) b.tol = j["tol"].get<double>();
    if (j.contains("seed")) b.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed budget JSON: ") + e.what());
  }
  if (b.starts < 1 || b.max_iter < 1 || !(b.tol > 0.0)) throw UsageError("budget values must be positive");
  return b;
}

inline Budget budget_from_json(const std::string& text) { return budget_from_value(parse(text)); }

} // namespace osnorm::json_io
