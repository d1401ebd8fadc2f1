#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lineact/measure.hpp"

namespace lineact {

/// sup over x, y in J of log(Df(x) / Df(y)). Exact over pieces for PL maps;
/// otherwise a grid plus the critical points of Df for sine-perturbed maps.
double distortion(const LineMap& f, const Interval& J, int grid = kDefaultGridPerUnit);

/// Lipschitz constant of log Df on `domain`. Sine-perturbed maps use the
/// closed form 4 pi^2 eps / (1 - 2 pi eps) (squared denominator for the
/// inverse), composites the chain rule. Throws for a PL map with a breakpoint
/// inside the domain.
double log_deriv_lipschitz(const LineMap& f, const Interval& domain = Interval::whole_line());

struct DistortionReport {
  long n = 0;
  double dist = 0.0;       // Dist(f^n, J)
  double orbit_sum = 0.0;  // sum_{i<n} |f^i(J)|
  double C = 0.0;
  double bound = 0.0;      // C * orbit_sum
  double margin = 0.0;     // bound - dist
  double chain_sum = 0.0;  // sum_{i<n} Dist(f, f^i(J))
  bool chain_ok = true;    // dist <= chain_sum
};

/// Both sides of Dist(f^n, J) <= C sum_{i<n} |f^i(J)| for n = 1..n_max.
std::vector<DistortionReport> distortion_sum_check(const LineMap& f, const Interval& J, long n_max,
                                                   int grid = kDefaultGridPerUnit);

struct SeriesSum {
  double partial = 0.0;
  double tail = 0.0;  // certified geometric bound on the remainder
  double ratio = 0.0;
  double total() const { return partial + tail; }
};

/// sum_{i=0}^{N} terms[i] plus a geometric tail bound. Certification needs the
/// last 10 consecutive ratios to be <= 0.9; throws otherwise.
SeriesSum certified_sum(const std::vector<double>& terms);

struct ExtensionReport {
  double C = 0.0;
  double delta = 0.0;
  double delta_limit = 0.0;  // min{|J|, exp(-2C)}
  Interval L;
  long N = 0;
  SeriesSum sum_J;
  SeriesSum sum_L;
  double max_ratio = 0.0;  // max_n |g^n(L)| / |g^n(J)|
  long worst_n = 0;
  bool pass = false;
};

/// Extends J to L with |L| < (1 + delta)|J| and checks |g^n(L)| <= 2|g^n(J)|
/// for n <= N and sum |g^i(L)| <= 2.
ExtensionReport schwartz_extension_check(const LineMap& g, const Interval& J,
                                         std::optional<double> delta_override = std::nullopt, long N = 60);

struct WanderingCandidate {
  Interval J;
  bool wandering = false;
  std::optional<Word> blocker;  // nontrivial word with w(J) meeting J
  std::size_t words_checked = 0;
  std::size_t trivial_words = 0;  // reduced words realizing the identity
};

struct WanderingResult {
  bool found = false;
  std::optional<Interval> J;
  int word_len = 0;
  std::vector<WanderingCandidate> candidates;
};

/// Checks w(J) and J are disjoint for every reduced word w of length <= word_len
/// realizing a nontrivial map. Endpoints are pushed through words lazily; a
/// word is composed in full only when its image meets J. When `group` is given,
/// a word counts as trivial when it realizes the identity there (a truncated
/// blow-up only models its base group, relators included).
WanderingResult wandering_interval_search(const Action& action, int word_len, const std::vector<Interval>& candidates,
                                          const Action* group = nullptr);

struct FiberScan {
  double min_increment = 0.0;
  std::vector<Interval> fibers;  // maximal runs of grid points with equal theta
  std::size_t points = 0;
  bool exact = false;
};

/// theta on `grid` equally spaced points of `window`; adjacent points whose
/// theta values agree to the measure tolerance form fibers.
FiberScan theta_fiber_scan(const Measure& mu, const Interval& window, int grid);

struct ContrastReport {
  FiberScan smooth;
  FiberScan smooth_refined;  // grid doubled
  FiberScan blowup;
  bool smooth_injective = false;
  bool blowup_has_fiber = false;
  bool contrast() const { return smooth_injective && blowup_has_fiber; }
};

ContrastReport conjugacy_contrast_report(const Measure& smooth_mu, const Measure& blowup_mu, const Interval& window,
                                         int grid);

}  // namespace lineact
