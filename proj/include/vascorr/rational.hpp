#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace vascorr {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

namespace detail {
inline unsigned& precision_slot() {
  static unsigned digits = 50;
  return digits;
}
}  // namespace detail

/// Decimal digits used for Real computations and decimal renderings.
inline unsigned decimal_precision() { return detail::precision_slot(); }

inline void set_decimal_precision(unsigned digits) {
  if (digits < 15) throw std::domain_error("precision must be at least 15 digits");
  detail::precision_slot() = digits;
  Real::default_precision(digits);
}

/// Make sure the MPFR default matches the configured precision before
/// constructing any Real.
inline void sync_real_precision() { Real::default_precision(decimal_precision()); }

// floor(num/den) for den > 0
inline Integer floor_div(const Integer& num, const Integer& den) {
  Integer q;
  mpz_fdiv_q(q.backend().data(), num.backend().data(), den.backend().data());
  return q;
}

inline Integer floor_rational(const Rational& x) {
  return floor_div(numerator(x), denominator(x));
}

inline Integer ceil_rational(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.backend().data(), numerator(x).backend().data(),
             denominator(x).backend().data());
  return q;
}

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline bool fits_int64(const Integer& x) {
  return x >= std::numeric_limits<long long>::min() &&
         x <= std::numeric_limits<long long>::max();
}

inline long long to_int64(const Integer& x) {
  if (!fits_int64(x)) throw std::domain_error("integer too large for this operation");
  return x.convert_to<long long>();
}

inline Integer int128_to_integer(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  Integer hi = static_cast<unsigned long long>(u >> 64);
  Integer lo = static_cast<unsigned long long>(u);
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

/// Canonical "p/q" rendering, "p" when q = 1.
inline std::string rational_to_string(const Rational& x) { return x.str(); }

/// Parse "p" or "p/q"; result reduced to lowest terms with positive denominator.
inline Rational rational_from_string(std::string_view s) {
  auto bad = [&] { return std::domain_error("not a rational: '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto parse_int = [&](std::string_view t) {
    if (t.empty() || (t.size() == 1 && (t[0] == '-' || t[0] == '+'))) throw bad();
    for (size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') throw bad();
    return Integer(std::string(t));
  };
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  Integer num = parse_int(s.substr(0, slash));
  Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::domain_error("zero denominator in '" + std::string(s) + "'");
  Rational r(num);
  r /= Rational(den);
  return r;
}

inline Real rational_to_real(const Rational& x) {
  sync_real_precision();
  return Real(x);
}

/// Decimal rendering at the configured precision (significant digits).
inline std::string decimal_string(const Rational& x) {
  return rational_to_real(x).str(decimal_precision(), std::ios_base::fmtflags(0));
}

inline std::string decimal_string(const Real& x) {
  return x.str(decimal_precision(), std::ios_base::fmtflags(0));
}

inline Real log_real(const Integer& a) {
  sync_real_precision();
  if (a <= 0) throw std::domain_error("log requires a positive argument");
  return log(Real(a));
}

inline Real log2_constant() { return log_real(Integer(2)); }

}  // namespace vascorr
