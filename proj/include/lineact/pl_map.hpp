#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lineact/rational.hpp"

namespace lineact {

/// One affine piece x -> slope * x + intercept.
struct AffinePiece {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& x) const { return slope * x + intercept; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// Eventual affine form of a map at +infinity. Ordered lexicographically.
struct Germ {
  Rational slope;
  Rational intercept;

  friend bool operator==(const Germ&, const Germ&) = default;
  friend bool operator<(const Germ& a, const Germ& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  }
  friend bool operator>(const Germ& a, const Germ& b) { return b < a; }
  bool is_identity() const { return slope == 1 && intercept == 0; }
};

/// An interval of points fixed by a map. Missing ends are infinite.
struct FixedInterval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

/// Exact fixed set of a piecewise-affine map.
struct PLFixedSet {
  std::vector<Rational> points;          // isolated fixed points, increasing
  std::vector<FixedInterval> intervals;  // pieces coinciding with the identity

  /// 0, 1, or 2 (meaning "two or more", including any fixed interval).
  int count_class() const;
};

/// Orientation-preserving piecewise-affine homeomorphism of the line with
/// rational breakpoints and slopes. Always stored normalized: adjacent pieces
/// have distinct slopes, so equal maps have equal representations.
class PLMap {
 public:
  PLMap();  // identity

  static PLMap identity() { return PLMap(); }
  static PLMap affine(const Rational& a, const Rational& b);
  static PLMap translation(const Rational& t) { return affine(1, t); }

  /// Breakpoints strictly increasing, slopes.size() == breakpoints.size() + 1,
  /// all slopes positive; the anchor (x0, f(x0)) fixes the additive constant.
  static PLMap from_slopes(std::vector<Rational> breakpoints, std::vector<Rational> slopes,
                           const std::pair<Rational, Rational>& anchor);

  /// Interpolates strictly increasing knots (x_i, y_i); outside the knot range
  /// the map continues with the given outer slopes.
  static PLMap from_knots(const std::vector<std::pair<Rational, Rational>>& knots,
                          const Rational& left_slope, const Rational& right_slope);

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  /// Slope of the piece containing x; at a breakpoint the right-hand piece.
  const Rational& slope_at(const Rational& x) const;
  double derivative(double x) const;

  PLMap inverse() const;

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  std::size_t piece_index(const Rational& x) const;
  std::size_t piece_index(double x) const;

  Germ germ() const { return {pieces_.back().slope, pieces_.back().intercept}; }
  Germ left_germ() const { return {pieces_.front().slope, pieces_.front().intercept}; }

  bool is_identity() const { return breakpoints_.empty() && pieces_.front().slope == 1 && pieces_.front().intercept == 0; }
  bool is_affine() const { return breakpoints_.empty(); }

  PLFixedSet fixed_points() const;

  /// Points at which the map's behaviour changes plus one interior point of
  /// every piece; useful for exact witness searches.
  std::vector<Rational> probe_points() const;

  /// Canonical text form; equal maps give equal keys.
  std::string key() const;

  friend bool operator==(const PLMap&, const PLMap&) = default;

  friend PLMap compose(const PLMap& f, const PLMap& g);

 private:
  PLMap(std::vector<Rational> breakpoints, std::vector<AffinePiece> pieces);
  void normalize();

  std::vector<Rational> breakpoints_;
  std::vector<AffinePiece> pieces_;
};

/// f o g, computed exactly.
PLMap compose(const PLMap& f, const PLMap& g);

/// f^n for any integer n.
PLMap power(const PLMap& f, long n);

/// Non-decreasing piecewise-affine map (slopes >= 0). Used for collapse maps,
/// which are flat on the intervals they crush.
class MonotonePL {
 public:
  MonotonePL() = default;
  MonotonePL(std::vector<std::pair<Rational, Rational>> knots, Rational left_slope, Rational right_slope);

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  const std::vector<std::pair<Rational, Rational>>& knots() const { return knots_; }
  const Rational& left_slope() const { return left_slope_; }
  const Rational& right_slope() const { return right_slope_; }

  /// Maximal intervals on which the map is constant.
  std::vector<std::pair<Rational, Rational>> flat_intervals() const;

 private:
  std::vector<std::pair<Rational, Rational>> knots_;
  Rational left_slope_{1};
  Rational right_slope_{1};
};

}  // namespace lineact
