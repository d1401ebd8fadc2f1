#include "lineact/rational.hpp"

#include <cctype>
#include <cmath>

namespace lineact {

namespace {

mpz_class parse_integer(std::string_view digits, std::string_view original) {
  if (digits.empty()) throw Error("malformed rational: '" + std::string(original) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("malformed rational: '" + std::string(original) + "'");
    }
  }
  return mpz_class(std::string(digits), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    mpz_class den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    out = Rational(num, den);
    out.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_part = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
        exp_negative = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      mpz_class ez = parse_integer(exp_part, text);
      if (!ez.fits_slong_p() || abs(ez) > 10000) throw Error("exponent out of range in '" + std::string(text) + "'");
      exponent = ez.get_si() * (exp_negative ? -1 : 1);
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view frac = s.substr(dot + 1);
      digits = std::string(s.substr(0, dot)) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
      if (s.substr(0, dot).empty() && frac.empty()) digits.clear();
    } else {
      digits = std::string(s);
    }
    out = Rational(parse_integer(digits, text));
    out *= pow(Rational(10), exponent);
  }
  if (negative) out = -out;
  return out;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error("non-finite value cannot be represented exactly");
  return Rational(x);
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational floor(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (hi < lo) return simplest_between(hi, lo);
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_between(-hi, -lo);
  Rational fl = floor(lo);
  if (fl == lo) return lo;
  if (fl + 1 <= hi) return fl + 1;
  return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl));
}

}  // namespace lineact
