#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bipoisson {

// Exact rational scalar used by all "exact mode" computations.
using Rational = mpq_class;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return Rational(abs(x)); }

inline double max_abs(double x) { return std::fabs(x); }
inline double max_abs(const Rational& x) { return std::fabs(x.get_d()); }

// mpq_class(p, q) does not canonicalize; this does.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Accepts "p/q", "p", or a plain decimal like "0.25" / "-1.5e-3" (the latter
// converted exactly from its base-10 digits).
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
  }
  std::string digits = s;
  long exp10 = 0;
  auto epos = digits.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(digits.substr(epos + 1));
    digits = digits.substr(0, epos);
  }
  auto dot = digits.find('.');
  if (dot != std::string::npos) {
    exp10 -= long(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  Rational q(num);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 >= 0)
    q *= Rational(pow10);
  else
    q /= Rational(pow10);
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& x) { return x.get_str(); }

}  // namespace bipoisson
