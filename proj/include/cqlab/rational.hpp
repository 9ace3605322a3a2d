#ifndef CQLAB_RATIONAL_HPP
#define CQLAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cqlab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) {
  return q.sign();
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  // 53 bits of mantissa
  std::int64_t mi = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mi);
  if (exp >= 0)
    r *= Rational(Int(1) << exp);
  else
    r /= Rational(Int(1) << (-exp));
  return r;
}

inline std::string rat_str(const Rational& q) {
  std::string s = num(q).str();
  if (den(q) != 1) s += "/" + den(q).str();
  return s;
}

/// Parses "p", "p/q" or a plain decimal like "-1.25".
inline std::optional<Rational> rat_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Int p(s.substr(0, slash));
      Int q(s.substr(slash + 1));
      if (q == 0) return std::nullopt;
      return Rational(p, q);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(Int(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = neg ? "-0" : "0";
    Int ip(head);
    Int scale = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
    Int frac = tail.empty() ? Int(0) : Int(tail);
    Rational r = Rational(ip) + (neg ? -Rational(frac, scale) : Rational(frac, scale));
    return r;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace cqlab

#endif
