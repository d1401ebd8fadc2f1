#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lineact/measure.hpp"

namespace lineact {

/// a(x) = x + 1, b(x) = 2x.
Action bs12();

/// Generators x -> a x + b, named g0, g1, ...
Action affine_action(const std::vector<std::pair<Rational, Rational>>& pairs);

/// The base point of a blow-up is fixed by a nontrivial element.
class StabilizerError : public Error {
 public:
  StabilizerError(const std::string& what, Word word) : Error(what), word_(std::move(word)) {}
  const Word& word() const { return word_; }

 private:
  Word word_;
};

struct BlowupSpec {
  Action base;  // affine generators
  Rational base_point{1, 3};
  Rational l0{1, 10};
  Rational beta{1, 2};
  int depth = 5;
};

struct Gap {
  Word word;  // base element carrying the base point here (shortest word)
  Rational point;
  Rational lo, hi;  // inserted interval in blown-up coordinates
};

struct Blowup {
  BlowupSpec spec;
  Action action;       // same generator names as the base
  MonotonePL collapse; // theta0 with theta0 o g_blown = g_base o theta0
  std::vector<Gap> gaps;  // sorted by position
  Rational eta;           // width of the boundary windows

  const Gap& gap_at(const Rational& point) const;
  Measure measure() const { return Measure::pullback(collapse); }
};

/// Inserts an interval of length l0 beta^|w| at every point w(x*) with
/// |w| <= depth. Throws StabilizerError when two of those words carry x* to the
/// same point.
/// Points whose image leaves the blown-up set are handled by 2^-40 windows,
/// so the intertwining holds exactly at gap endpoints and to ~1e-11 elsewhere.
Blowup blowup(const BlowupSpec& spec);

/// Throws unless word_len < depth: certificates beyond the truncation depth
/// would see the truncation.
void require_depth(const Blowup& b, int word_len);

struct RandomConstraints {
  std::optional<Interval> fixed_points_in;
  std::optional<int> max_fixed_points;
};

/// Deterministic from the seed. Each generator is resampled until its own
/// fixed set meets the constraints.
Action random_pl_action(std::uint64_t seed, int n_generators, int n_breakpoints, const RandomConstraints& constraints = {},
                        int budget = 10000);

}  // namespace lineact
