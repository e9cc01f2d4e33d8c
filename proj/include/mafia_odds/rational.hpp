// Rational helpers: decimal/fraction parsing and a certified comparison of a
// rational against an integer raised to a rational power.
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "core.hpp"

namespace mafia {

/// Parses "3", "0.0001", "1/100" or "-2.5" exactly.
inline mpq_class parse_rational(std::string_view text) {
  const std::string s(text);
  auto bad = [&] { return error(error_kind::invalid_params, "not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0 || den == 0)
      throw bad();
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  mpq_class q(negative ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

namespace detail {

struct mpfr_value {
  mpfr_t v;
  explicit mpfr_value(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~mpfr_value() { mpfr_clear(v); }
  mpfr_value(const mpfr_value&) = delete;
  mpfr_value& operator=(const mpfr_value&) = delete;
};

}  // namespace detail

/// Sign of x - base^exponent for x >= 0, integer base >= 1 and rational
/// exponent > 0. Decided with MPFR interval bounds first and exact integer
/// powers when the intervals overlap, so the answer is always exact.
inline int compare_with_power(const mpq_class& x, std::int64_t base, const mpq_class& exponent) {
  if (base < 1 || exponent <= 0) throw error(error_kind::invalid_params, "compare_with_power: need base >= 1, exponent > 0");
  const mpz_class& p = exponent.get_num();
  const mpz_class& q = exponent.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p())
    throw error(error_kind::invalid_params, "exponent numerator/denominator too large");
  const unsigned long pu = p.get_ui();
  const unsigned long qu = q.get_ui();

  mpz_class target;  // base^p, so base^exponent = target^(1/q)
  mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(base), pu);

  constexpr mpfr_prec_t prec = 192;
  detail::mpfr_value xl(prec), xu(prec), yl(prec), yu(prec);
  mpfr_set_q(xl.v, x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xu.v, x.get_mpq_t(), MPFR_RNDU);
  mpfr_set_z(yl.v, target.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(yu.v, target.get_mpz_t(), MPFR_RNDU);
  mpfr_rootn_ui(yl.v, yl.v, qu, MPFR_RNDD);
  mpfr_rootn_ui(yu.v, yu.v, qu, MPFR_RNDU);
  if (mpfr_less_p(xu.v, yl.v)) return -1;
  if (mpfr_greater_p(xl.v, yu.v)) return 1;

  // x^q vs target, i.e. num^q vs target * den^q.
  mpz_class lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), x.get_num_mpz_t(), qu);
  mpz_pow_ui(rhs.get_mpz_t(), x.get_den_mpz_t(), qu);
  rhs *= target;
  const int c = cmp(lhs, rhs);
  return (c > 0) - (c < 0);
}

}  // namespace mafia
