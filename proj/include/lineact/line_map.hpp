#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lineact/pl_map.hpp"

namespace lineact {

/// x -> x + c + eps * sin(2 pi x), or its inverse when `inverted` is set.
/// Requires |2 pi eps| < 1 so the derivative stays positive.
struct SineMap {
  double c = 0.0;
  double eps = 0.0;
  bool inverted = false;

  static SineMap make(double c, double eps);

  double forward(double x) const;
  double forward_derivative(double x) const;
  double forward_second_derivative(double x) const;
  /// Monotone bisection; the result is within 1e-12 of the true preimage.
  double backward(double y) const;

  double operator()(double x) const { return inverted ? backward(x) : forward(x); }
  double derivative(double x) const;

  SineMap inverse() const { return {c, eps, !inverted}; }
  friend bool operator==(const SineMap&, const SineMap&) = default;
};

/// Tolerance of the numerical inverse of a sine-perturbed translation.
inline constexpr double kInverseTolerance = 1e-12;

using Atom = std::variant<PLMap, SineMap>;

/// Unnormalized composition; factors[0] is applied last.
struct Composite {
  std::vector<Atom> factors;
};

/// Orientation-preserving homeomorphism of the line in one of the supported
/// representations. Piecewise-affine maps are closed under the group
/// operations; anything involving a sine-perturbed map becomes a Composite
/// evaluated lazily.
class LineMap {
 public:
  LineMap() : rep_(PLMap{}) {}
  LineMap(PLMap f) : rep_(std::move(f)) {}
  LineMap(SineMap f) : rep_(f) {}
  LineMap(Composite f);

  static LineMap identity() { return LineMap(); }
  static LineMap affine(const Rational& a, const Rational& b) { return PLMap::affine(a, b); }
  static LineMap sine_perturbed_translation(double c, double eps) { return SineMap::make(c, eps); }

  bool is_pl() const { return std::holds_alternative<PLMap>(rep_); }
  const PLMap& pl() const;
  const PLMap* as_pl() const { return std::get_if<PLMap>(&rep_); }
  const SineMap* as_sine() const { return std::get_if<SineMap>(&rep_); }
  const Composite* as_composite() const { return std::get_if<Composite>(&rep_); }

  /// Atoms of the map in application order reversed (outermost first).
  std::vector<Atom> atoms() const;

  Rational operator()(const Rational& x) const;  // PL only
  double operator()(double x) const;
  double derivative(double x) const;

  /// True when exact equality is decidable (PL) and holds, or the
  /// representations coincide.
  bool is_identity() const;

  std::string describe() const;

  friend bool operator==(const LineMap& a, const LineMap& b);

 private:
  std::variant<PLMap, SineMap, Composite> rep_;
};

LineMap compose(const LineMap& f, const LineMap& g);
LineMap invert(const LineMap& f);
LineMap power(const LineMap& f, long n);
/// c^{-1} o f o c.
LineMap conjugate(const LineMap& f, const LineMap& c);
/// g h g^{-1} h^{-1}.
LineMap commutator(const LineMap& g, const LineMap& h);

/// Interval with possibly infinite ends. For finite ends lo < hi.
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(Rational lo, Rational hi);
  static Interval whole_line() { return {}; }

  bool bounded() const { return lo.has_value() && hi.has_value(); }
  Rational length() const;  // throws when unbounded
  bool contains(const Rational& x) const;
  std::string describe() const;
};

enum class FixedCount { Zero, One, TwoOrMore };

std::string to_string(FixedCount c);

struct FixedPointReport {
  std::vector<double> points;            // numeric values, increasing
  std::vector<Rational> exact_points;    // filled on the PL path
  std::vector<FixedInterval> intervals;  // pieces fixed pointwise (PL path)
  FixedCount count = FixedCount::Zero;
  bool exact = false;
};

/// Default number of grid points per unit length for numerical searches.
inline constexpr int kDefaultGridPerUnit = 4096;

/// PL maps: exact over the whole line (the search interval is ignored).
/// Other maps: sign changes of f(x) - x on a grid over the bounded search
/// interval, refined by bisection to 1e-12.
FixedPointReport fixed_points(const LineMap& f, const Interval& search = Interval::whole_line(),
                              int grid_per_unit = kDefaultGridPerUnit);

struct CrossingResult {
  bool equal = false;  // f == g as maps
  int count = 0;       // saturates at the cap; TwoOrMore for coincident pieces
};

/// Number of solutions of f(x) = g(x), i.e. fixed points of g o f^{-1}.
CrossingResult crossing_count(const LineMap& f, const LineMap& g, int cap, const Interval& search = Interval::whole_line(),
                              int grid_per_unit = kDefaultGridPerUnit);

}  // namespace lineact
