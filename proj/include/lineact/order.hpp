#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lineact/word.hpp"

namespace lineact {

/// Raised when an action violates the "at most one fixed point" hypothesis
/// that an operation relies on.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(const std::string& what, Word word) : Error(what), word_(std::move(word)) {}
  const Word& word() const { return word_; }

 private:
  Word word_;
};

enum class Relation { Greater, Less, Equal };

std::string to_string(Relation r);

/// Eventual order of two maps at +infinity.
struct OrderResult {
  Relation relation = Relation::Equal;
  /// Beyond this point the strict inequality holds (absent for Equal).
  std::optional<double> threshold;
  std::optional<Rational> exact_threshold;
  /// Equal with identical == false means the maps share their germ at +infinity
  /// but differ somewhere; only possible for actions failing the hypothesis.
  bool identical = false;
  bool exact = false;
};

/// Default tolerance of the numerical (non piecewise-affine) paths.
inline constexpr double kNumericTolerance = 1e-9;

/// PL maps: lexicographic comparison of germs at +infinity. Other maps: sign of
/// g - h sampled on a window far to the right; throws "order undecided at
/// tolerance" when the sign is not constant there.
OrderResult compare(const LineMap& g, const LineMap& h);

bool is_positive(const LineMap& g);

struct Commensurability {
  bool yes = false;
  long n = 0;  // g^-n < h < g^n
  long m = 0;  // h^-m < g < h^m
  /// For No: true when germ analysis proves no power works; false when only
  /// the power bound ran out.
  bool proof = false;
  std::string reason;
};

inline constexpr long kDefaultPowerBound = 64;

/// Minimal witnesses n, m <= power_bound with g^-n < h < g^n and h^-m < g < h^m.
Commensurability commensurate(const LineMap& g, const LineMap& h, long power_bound = kDefaultPowerBound);

/// Least |n| <= power_bound (positive n tried before -n) with h^n > g and
/// h^-n < g^-1. Throws when the bound is exhausted, which for an action
/// satisfying the hypothesis indicates a violation.
long dominating_power(const LineMap& h, const LineMap& g, long power_bound = kDefaultPowerBound);

struct InfinitesimalResult {
  bool yes = false;
  std::optional<long> witness;  // n with h^n >= g or h^n <= g^-1
  bool exact = false;           // false: "bounded check only"
};

/// Whether g^-1 < h^n < g for all integers n (g positive). Exact for PL maps via
/// germ analysis; otherwise checks |n| <= power_bound.
InfinitesimalResult is_infinitesimal(const LineMap& h, const LineMap& g, long power_bound = kDefaultPowerBound);

struct HypothesisResult {
  bool pass = true;
  std::optional<Element> offender;
  FixedPointReport offender_fixed_points;
  std::size_t elements_checked = 0;
};

/// Every nontrivial element of word length <= word_len has at most one fixed
/// point. Exact for PL actions; other actions are searched numerically on
/// `search`.
HypothesisResult hypothesis_check(const Action& action, int word_len,
                                  const Interval& search = Interval::closed(-16, 16));

struct InfinitesimalSample {
  bool free_action = false;          // no sampled element has a fixed point: I = G
  std::optional<Element> reference;  // positive g with exactly one fixed point
  std::vector<Element> members;      // includes the identity
  bool exact = true;
  /// I(g) agreed with I(g^2), I(g^3) and with I(g') for other sampled
  /// one-fixed-point elements g'.
  bool reference_independent = true;
  std::vector<std::string> independence_notes;
};

/// Sampled infinitesimal subgroup. Throws HypothesisViolation when an element
/// of the sample has two or more fixed points.
InfinitesimalSample infinitesimal_subgroup_sample(const Action& action, int word_len, long power_bound = kDefaultPowerBound);

struct CommuteResult {
  enum class Kind { FreePair, CommonFixedPoint, CommuteOther, NotCommute };
  Kind kind = Kind::NotCommute;
  std::optional<Rational> point;   // common fixed point, or witness x for NotCommute
  std::optional<double> numeric_point;
};

std::string to_string(CommuteResult::Kind k);

CommuteResult commute_classify(const LineMap& g, const LineMap& h);

struct AbelianResult {
  bool abelian = true;
  std::optional<std::pair<Word, Word>> witness;
  std::optional<LineMap> commutator;
  std::size_t pairs_checked = 0;
};

/// Commutators of every generator with every element up to word_len.
AbelianResult abelian_check(const Action& action, int word_len);

struct MetabelianResult {
  bool pass = true;
  std::string failure;  // empty on pass
  std::optional<std::pair<Word, Word>> witness;
  std::size_t commutators = 0;
  std::size_t pairs_checked = 0;
  bool infinitesimal_checked = false;
  std::vector<Element> sampled_commutators;
};

/// Commutators [u, v] of elements of length <= (word_len + 1) / 2 must commute
/// pairwise and lie in the infinitesimal subgroup.
MetabelianResult metabelian_check(const Action& action, int word_len, long power_bound = kDefaultPowerBound);

}  // namespace lineact
