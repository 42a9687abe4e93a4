#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "osnorm/errors.hpp"
#include "osnorm/format.hpp"
#include "osnorm/seqspace.hpp"

namespace osnorm {

/// Hoelder conjugate: 1/p + 1/q = 1.
inline double conjugate_exponent(double p) {
  require_exponent(p);
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

/// Which operator space structure a matrix norm is taken in.
class Structure {
 public:
  enum class Kind { Min, Max, Row, Col, OH, Interp };

  static Structure min(double p) { return Structure(Kind::Min, checked(p)); }
  static Structure max(double p) { return Structure(Kind::Max, checked(p)); }
  static Structure row() { return Structure(Kind::Row, 2.0); }
  static Structure col() { return Structure(Kind::Col, 2.0); }
  static Structure oh() { return Structure(Kind::OH, 2.0); }
  static Structure interp(Structure s0, Structure s1, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
      throw ParameterError("interpolation parameter theta must lie in (0,1)");
    Structure s(Kind::Interp, 2.0);
    s.theta_ = theta;
    s.s0_ = std::make_shared<const Structure>(std::move(s0));
    s.s1_ = std::make_shared<const Structure>(std::move(s1));
    return s;
  }

  Kind kind() const { return kind_; }
  /// Exponent of MIN(p)/MAX(p).
  double p() const { return p_; }
  double theta() const { return theta_; }
  const Structure& first() const { return *s0_; }
  const Structure& second() const { return *s1_; }

  bool is_exact() const { return kind_ == Kind::Row || kind_ == Kind::Col || kind_ == Kind::OH; }

  /// Exponent of the underlying Banach space l_p.
  double base_exponent() const {
    switch (kind_) {
      case Kind::Min:
      case Kind::Max: return p_;
      case Kind::Interp: {
        const double a = 1.0 / s0_->base_exponent();
        const double b = 1.0 / s1_->base_exponent();
        const double inv = (1.0 - theta_) * a + theta_ * b;
        return inv == 0.0 ? kInf : 1.0 / inv;
      }
      default: return 2.0;
    }
  }

  Structure dual() const {
    switch (kind_) {
      case Kind::Min: return max(conjugate_exponent(p_));
      case Kind::Max: return min(conjugate_exponent(p_));
      case Kind::Row: return col();
      case Kind::Col: return row();
      case Kind::OH: return oh();
      case Kind::Interp: return interp(s0_->dual(), s1_->dual(), theta_);
    }
    throw UsageError("unknown structure");
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Min: return "min:p=" + format_double(p_);
      case Kind::Max: return "max:p=" + format_double(p_);
      case Kind::Row: return "row";
      case Kind::Col: return "col";
      case Kind::OH: return "oh";
      case Kind::Interp:
        return "interp:(" + s0_->to_string() + "," + s1_->to_string() +
               ",theta=" + format_double(theta_) + ")";
    }
    return {};
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Min:
      case Kind::Max:
        // Conjugating twice can be off by an ulp.
        return a.p_ == b.p_ || std::abs(a.p_ - b.p_) <= 1e-12 * std::abs(a.p_);
      case Kind::Interp:
        return a.theta_ == b.theta_ && *a.s0_ == *b.s0_ && *a.s1_ == *b.s1_;
      default: return true;
    }
  }

 private:
  Structure(Kind k, double p) : kind_(k), p_(p) {}
  static double checked(double p) {
    require_exponent(p);
    return p;
  }

  Kind kind_;
  double p_ = 2.0;
  double theta_ = 0.5;
  std::shared_ptr<const Structure> s0_, s1_;
};

namespace detail {

class StructureParser {
 public:
  explicit StructureParser(std::string_view text) : s_(text) {}

  Structure parse_all() {
    Structure out = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return out;
  }

  double number_all() {
    const double v = number();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError("bad structure spec '" + std::string(s_) + "' at " + std::to_string(pos_) +
                     ": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  // Accepts decimals, "inf", and fractions such as 4/3.
  double number() {
    skip_ws();
    if (eat("inf")) return kInf;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                s_[pos_] == '-' || s_[pos_] == '+'))
      ++pos_;
    if (start == pos_) fail("expected a number");
    double v = 0.0;
    try {
      v = std::stod(std::string(s_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      fail("malformed number");
    }
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      const double d = number();
      if (d == 0.0) fail("division by zero");
      v /= d;
    }
    return v;
  }

  Structure parse() {
    if (eat("interp")) {
      expect(":");
      expect("(");
      Structure a = parse();
      expect(",");
      Structure b = parse();
      expect(",");
      expect("theta");
      expect("=");
      const double t = number();
      expect(")");
      return Structure::interp(std::move(a), std::move(b), t);
    }
    if (eat("min")) {
      expect(":");
      expect("p");
      expect("=");
      return Structure::min(number());
    }
    if (eat("max")) {
      expect(":");
      expect("p");
      expect("=");
      return Structure::max(number());
    }
    if (eat("row")) return Structure::row();
    if (eat("col")) return Structure::col();
    if (eat("oh")) return Structure::oh();
    fail("unknown structure");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `min:p=2`, `max:p=4`, `row`, `col`, `oh`,
/// `interp:(min:p=2,max:p=2,theta=0.5)`.
inline Structure parse_structure(std::string_view text) {
  return detail::StructureParser(text).parse_all();
}

/// Parses a real such as `2`, `0.5`, `4/3` or `inf`.
inline double parse_real(std::string_view text) { return detail::StructureParser(text).number_all(); }

} // namespace osnorm
