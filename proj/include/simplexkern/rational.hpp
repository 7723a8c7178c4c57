#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace simplexkern {

using Integer = boost::multiprecision::cpp_int;

// Exact scalar flavor. Kept in lowest terms with positive denominator by the
// backend; arithmetic between exact scalars is closed and exact. Expression
// templates are off so operations deduce cleanly through templated kernels.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline Rational rational_pow(Rational base, long e) {
  if (e < 0) return Rational(1) / rational_pow(base, -e);
  Rational out(1);
  while (e-- > 0) out *= base;
  return out;
}

// Parses "p", "p/q" or a plain decimal like "0.25" into an exact rational.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rational(p, q);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(Integer(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  bool neg = !digits.empty() && digits[0] == '-';
  Integer p(digits);
  Integer q(1);
  for (size_t i = dot + 1; i < s.size(); ++i) q *= 10;
  (void)neg;
  return Rational(p, q);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Exact rational with the same value as the double (doubles are dyadic
// rationals); used when a floating sequence needs an exact certificate scan.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("cannot rationalize non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  Integer num = Integer(std::ldexp(m, 53));
  exp -= 53;
  Rational r(num);
  if (exp > 0)
    r *= rational_pow(Rational(2), exp);
  else
    r /= rational_pow(Rational(2), -exp);
  return r;
}

template <class T>
struct scalar_traits {
  static constexpr bool exact = false;
};
template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
};

}  // namespace simplexkern
