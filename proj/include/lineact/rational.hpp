#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace lineact {

/// Arbitrary precision rational, always kept in canonical form.
using Rational = mpq_class;

/// Errors raised by the library. `what()` carries the user-facing message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-3.5e-2") exactly.
Rational parse_rational(std::string_view text);

/// Exact rational value of a finite double.
Rational from_double(double x);

/// Canonical "p/q" text ("p" when q == 1).
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Integer power, negative exponents allowed for nonzero bases.
Rational pow(const Rational& base, long exponent);

Rational floor(const Rational& q);

/// Rational with the smallest denominator in [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace lineact
