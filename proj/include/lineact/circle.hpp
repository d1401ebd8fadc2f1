#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lineact/order.hpp"

namespace lineact {

/// Lift of a piecewise-affine circle map: F(x + 1) = F(x) + 1, given by knots
/// (x_i, y_i) with 0 <= x_i < 1 and strictly increasing y_i, y_last < y_0 + 1.
/// Between knots F interpolates, wrapping around through (x_0 + 1, y_0 + 1).
class PeriodicPL {
 public:
  explicit PeriodicPL(std::vector<std::pair<Rational, Rational>> knots);

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;
  PeriodicPL inverse() const;

  const std::vector<std::pair<Rational, Rational>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<Rational, Rational>> knots_;
  std::vector<std::pair<double, double>> dknots_;
};

using LiftFactor = std::variant<LineMap, PeriodicPL>;

/// Lift of a circle homeomorphism; factors[0] is applied last.
class CircleLift {
 public:
  CircleLift() = default;
  /// Throws "lift identity violated" (with a witness x) when a factor fails
  /// F(x + 1) = F(x) + 1.
  explicit CircleLift(LiftFactor f);
  static CircleLift translation(const Rational& t) { return CircleLift(LineMap(PLMap::translation(t))); }

  double operator()(double x) const;
  /// Only when every factor is piecewise-affine.
  Rational operator()(const Rational& x) const;
  bool exact() const;
  /// Translation amount when the lift is a pure rational translation.
  std::optional<Rational> translation_amount() const;

  const std::vector<LiftFactor>& factors() const { return factors_; }

  friend CircleLift compose(const CircleLift& f, const CircleLift& g);
  friend CircleLift invert(const CircleLift& f);

 private:
  std::vector<LiftFactor> factors_;
};

CircleLift compose(const CircleLift& f, const CircleLift& g);
CircleLift invert(const CircleLift& f);
CircleLift power(const CircleLift& f, long n);

struct PeriodicityResult {
  bool ok = true;
  std::optional<double> witness;
};

/// g(y + q) = g(y) + p: exact for PL maps, on a grid over [-4, 4] otherwise.
PeriodicityResult periodicity_check(const LineMap& g, const Rational& q, const Rational& p);

/// Wraps f as a lift after checking f(x + 1) = f(x) + 1.
CircleLift quotient_commuting_element(const LineMap& f);

struct RotationEstimate {
  double estimate = 0.0;
  double error_bound = 0.0;  // 1/N
  std::optional<Rational> exact;
  long N = 0;
};

/// (F^N(x0) - x0) / N.
RotationEstimate rotation_number(const CircleLift& F, double x0, long N);

struct OrbitGaps {
  double largest_gap = 0.0;
  double gap_start = 0.0;
  std::vector<double> points;  // F^k(x0) mod 1, k < N, in orbit order
};

/// Largest empty arc of the first N orbit points on [0, 1).
OrbitGaps orbit_gap_stats(const CircleLift& F, double x0, long N);

struct DenjoyParams {
  Rational alpha{0};  // pass from_double(x) for an irrational target
  Rational base_point{0};
  int K = 8;  // blow up orbit points k alpha, |k| <= K
  Rational l0{1, 10};
  Rational beta{1, 2};
};

struct DenjoyApproximant {
  CircleLift lift;
  std::vector<std::pair<Rational, Rational>> gaps;  // inserted arcs in [0, 1)
  bool periodic_orbit = false;  // the orbit closes up within 2K + 1 steps
};

/// Rotation by alpha with the orbit of base_point blown up into arcs of length
/// l0 beta^|k| (renormalized to total length 1); the arcs are permuted along
/// the orbit and the two ends of the truncated orbit are handled by
/// collapsing/expanding 2^-40 windows.
DenjoyApproximant denjoy_approximant(const DenjoyParams& params);

struct CircleAction {
  std::string name;
  std::vector<std::pair<std::string, CircleLift>> lifts;
  /// Alternative form: a line action on the one-point compactification, with
  /// the point at infinity a formal fixed point of every generator.
  std::optional<Action> compactified;
};

struct CircleVerdict {
  enum class Kind { FreeAbelian, GlobalFixedPoint, HypothesisViolated, Falsified };
  Kind kind = Kind::FreeAbelian;
  std::optional<double> point;
  std::string point_label;  // "inf" for the compactification point
  std::optional<std::string> word;
  std::string detail;
  std::size_t words_checked = 0;
};

std::string to_string(CircleVerdict::Kind k);

/// Fixed points on the circle of the map with lift F (count saturating at 2).
std::vector<double> circle_fixed_points(const CircleLift& F, int grid = kDefaultGridPerUnit);

CircleVerdict circle_dichotomy_check(const CircleAction& action, int word_len);

}  // namespace lineact
