#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace folspec {

enum class ScalarKind { ExactRational, ApproxReal };

/// Exact arithmetic over Q. No rounding, equality is exact.
struct ExactRational {
  using scalar = mpq_class;
  static constexpr ScalarKind kind = ScalarKind::ExactRational;
};

/// Machine reals. A singular value counts toward the rank when it is at least
/// rank_tolerance * sigma_max * max(rows, cols).
struct ApproxReal {
  using scalar = double;
  static constexpr ScalarKind kind = ScalarKind::ApproxReal;
  static constexpr double default_tolerance = 1e-8;
  double rank_tolerance = default_tolerance;
};

template <class B>
concept Backend = std::same_as<B, ExactRational> || std::same_as<B, ApproxReal>;

template <Backend B>
using scalar_t = typename B::scalar;

class UnsupportedBackend : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string_view to_string(ScalarKind kind) {
  return kind == ScalarKind::ExactRational ? "rational" : "float";
}

inline ScalarKind parse_scalar_kind(std::string_view s) {
  if (s == "rational") return ScalarKind::ExactRational;
  if (s == "float") return ScalarKind::ApproxReal;
  throw std::invalid_argument("unknown scalar kind '" + std::string(s) + "' (expected rational|float)");
}

namespace detail {

// Accept U+2212 MINUS SIGN as well as '-', and strip surrounding blanks.
inline std::string normalize_number(std::string_view in) {
  std::string s;
  s.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i + 2 < in.size() && static_cast<unsigned char>(in[i]) == 0xE2 &&
        static_cast<unsigned char>(in[i + 1]) == 0x88 && static_cast<unsigned char>(in[i + 2]) == 0x92) {
      s.push_back('-');
      i += 2;
    } else {
      s.push_back(in[i]);
    }
  }
  auto first = s.find_first_not_of(" \t\n");
  auto last = s.find_last_not_of(" \t\n");
  if (first == std::string::npos) return {};
  return s.substr(first, last - first + 1);
}

inline mpz_class parse_integer(const std::string& s, std::string_view context) {
  std::string body = s;
  if (!body.empty() && body[0] == '+') body.erase(0, 1);
  std::size_t digits_from = (!body.empty() && body[0] == '-') ? 1 : 0;
  if (body.size() == digits_from) throw std::invalid_argument("malformed number '" + std::string(context) + "'");
  for (std::size_t i = digits_from; i < body.size(); ++i) {
    if (body[i] < '0' || body[i] > '9') throw std::invalid_argument("malformed number '" + std::string(context) + "'");
  }
  return mpz_class(body, 10);
}

}  // namespace detail

/// Parses "3", "-3/2", "2.19722457", "1.5e-3" into an exact rational.
inline mpq_class parse_rational(std::string_view text) {
  const std::string s = detail::normalize_number(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num = detail::parse_integer(s.substr(0, slash), s);
    mpz_class den = detail::parse_integer(s.substr(slash + 1), s);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text[0] == '+') exp_text.erase(0, 1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
  }
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    if (digits == "" || digits == "-" || digits == "+") throw std::invalid_argument("malformed number '" + s + "'");
  }
  mpz_class num = detail::parse_integer(digits, s);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class q = exponent < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
  q.canonicalize();
  return q;
}

inline double parse_real(std::string_view text) {
  const std::string s = detail::normalize_number(text);
  auto parse_plain = [&](const std::string& part) {
    std::string body = (!part.empty() && part[0] == '+') ? part.substr(1) : part;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
      throw std::invalid_argument("malformed number '" + s + "'");
    }
    return value;
  };
  double value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    double den = parse_plain(s.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator in '" + s + "'");
    value = parse_plain(s.substr(0, slash)) / den;
  } else {
    value = parse_plain(s);
  }
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number '" + s + "'");
  return value;
}

template <Backend B>
scalar_t<B> parse_scalar(std::string_view text) {
  if constexpr (B::kind == ScalarKind::ExactRational) {
    return parse_rational(text);
  } else {
    return parse_real(text);
  }
}

inline std::string format_scalar(const mpq_class& q) { return q.get_str(); }

/// Shortest round-trip representation is not needed; 17 significant digits
/// always round-trip a double.
inline std::string format_scalar(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double to_double(const mpq_class& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline bool is_zero(const mpq_class& q) { return sgn(q) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

inline double magnitude(const mpq_class& q) { return std::fabs(q.get_d()); }
inline double magnitude(double x) { return std::fabs(x); }

}  // namespace folspec
