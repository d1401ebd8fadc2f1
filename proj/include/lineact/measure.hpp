#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lineact/order.hpp"

namespace lineact {

/// x -> a x + b with a > 0.
struct AffineMap {
  Rational a{1};
  Rational b{0};

  /// (a1, b1) o (a2, b2) = (a1 a2, a1 b2 + b1).
  AffineMap operator*(const AffineMap& rhs) const { return {a * rhs.a, a * rhs.b + b}; }
  Rational operator()(const Rational& x) const { return a * x + b; }
  double operator()(double x) const { return a.get_d() * x + b.get_d(); }
  AffineMap inverse() const { return {1 / a, -b / a}; }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

struct LebesgueBackend {};

/// mu([x0, x1)) = theta0(x1) - theta0(x0) for a monotone collapse theta0.
struct PullbackBackend {
  MonotonePL collapse;
};

/// Heuristic estimate: a free element h is rectified to a unit translation
/// and mu is read off the empirical distribution of an orbit modulo 1.
struct EmpiricalBackend {
  PLMap rectifier;                // c with c h c^-1 = x +- 1
  std::vector<double> fractions;  // sorted orbit points mod 1
  std::vector<std::vector<double>> bootstrap;
};

struct EmpiricalParams {
  Word free_element;
  double base_point = 0.0;
  int orbit_length = 6;
  std::uint64_t seed = 0;
  int bootstrap_samples = 64;
};

struct MassEstimate {
  double value = 0.0;
  double error = 0.0;  // bootstrap standard deviation; 0 on exact backends
};

class Measure {
 public:
  static Measure lebesgue() { return Measure(LebesgueBackend{}); }
  static Measure pullback(MonotonePL collapse) { return Measure(PullbackBackend{std::move(collapse)}); }
  static Measure empirical(const Action& action, const EmpiricalParams& params);

  /// Signed mass: mu([x0, x1)) for x0 < x1, 0 when equal, -mu([x1, x0)) otherwise.
  double nu(double x0, double x1) const;
  /// Exact on the Lebesgue and pullback backends.
  std::optional<Rational> nu_exact(const Rational& x0, const Rational& x1) const;
  MassEstimate nu_with_error(double x0, double x1) const;

  bool exact() const { return !std::holds_alternative<EmpiricalBackend>(backend_); }
  /// 0 (exact), 1e-9 (pullback windows) or 1e-3 (empirical).
  double tolerance() const;
  std::string kind() const;
  std::string normalization() const;

  const PullbackBackend* as_pullback() const { return std::get_if<PullbackBackend>(&backend_); }

 private:
  using Backend = std::variant<LebesgueBackend, PullbackBackend, EmpiricalBackend>;
  explicit Measure(Backend b) : backend_(std::move(b)) {}
  double cdf(double x) const;  // empirical only
  Backend backend_;
};

inline constexpr double kPullbackTolerance = 1e-9;
inline constexpr double kEmpiricalTolerance = 1e-3;

/// theta(x) = nu(0, x).
double theta(const Measure& mu, double x);
std::optional<Rational> theta_exact(const Measure& mu, const Rational& x);

struct Scaling {
  double value = 0.0;
  std::optional<Rational> exact;
  double max_deviation = 0.0;
  std::vector<Interval> probes;
};

/// A(g) with mu(g(E)) = A(g) mu(E), re-checked on three disjoint probes.
Scaling scaling_factor(const Measure& mu, const LineMap& g, const Interval& probe = Interval::closed(0, 1));

struct TranslationNumber {
  double value = 0.0;
  std::optional<Rational> exact;
  double spread = 0.0;  // max disagreement between base points
  std::vector<double> base_points;
};

/// mu-mass from x to f(x), checked at x, x + 1/3 and x - 7/5. Defined only
/// when A(f) = 1.
TranslationNumber translation_number(const Measure& mu, const LineMap& f, double x = 0.0);

struct PhiResult {
  AffineMap map;
  bool exact = false;
};

/// (A(g), nu(0, g(0))).
PhiResult phi(const Measure& mu, const LineMap& g);

struct Residual {
  double max = 0.0;
  double worst_x = 0.0;
  std::string worst_generator;
  std::size_t points = 0;
  bool exact = false;
};

/// max |theta(g(x)) - phi(g)(theta(x))| over the generators of `action` and
/// `grid` equally spaced points of `window`.
Residual semiconjugacy_residual(const Measure& mu, const Action& action, int grid,
                                const Interval& window = Interval::closed(-4, 4));

struct DichotomyReport {
  FixedCount fixed = FixedCount::Zero;
  double scaling = 1.0;
  bool consistent = true;
  bool trivial = false;
};

/// A nontrivial g has exactly one fixed point iff A(g) != 1.
DichotomyReport kernel_fixed_point_dichotomy(const Measure& mu, const LineMap& g);

struct Rectification {
  PLMap c;
  int direction = 1;          // c h c^-1 = x + direction
  bool exact_global = false;  // identity verified on the whole line
  Interval window;            // where c(h(y)) = c(y) + direction holds exactly
};

/// Conjugates a fixed-point-free PL map to a unit translation by marching
/// fundamental domains outward from a point beyond the breakpoints.
Rectification rectify_free_element(const LineMap& h, int max_domains = 64);

}  // namespace lineact
