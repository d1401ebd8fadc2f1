#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lineact/action_io.hpp"
#include "lineact/regularity.hpp"

namespace lineact {

/// Attached to every report on a truncated blow-up.
inline constexpr const char* kBlowupLabel = "truncated C0 orbit blow-up of an affine action (topological analogue)";

struct RunConfig {
  int words_max_len = 6;
  long power_bound = kDefaultPowerBound;
  int grid = kDefaultGridPerUnit;
  double tol = kNumericTolerance;
  std::uint64_t seed = 0;
  std::string format = "json";  // json | csv
  std::string out;              // empty: stdout

  /// Throws InputError for non-positive bounds or an unknown format.
  void validate() const;
  nlohmann::json to_json() const;
};

enum class Verdict { Pass, Falsified, NotApplicable, Inconclusive };

std::string to_string(Verdict v);

struct CheckResult {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  Verdict verdict = Verdict::Pass;
  nlohmann::json witnesses = nlohmann::json::array();
  nlohmann::json data = nlohmann::json::object();
  double elapsed_ms = 0.0;
};

struct Report {
  std::string command;
  std::string subject;  // suite or experiment name
  std::string spec_hash;
  RunConfig config;
  std::vector<CheckResult> checks;

  bool falsified() const;
  int exit_code() const { return falsified() ? 1 : 0; }
  /// Checks sorted by name; timings gathered in the single "timing" field.
  nlohmann::json to_json() const;
};

/// 64-bit FNV-1a, as "fnv1a64:<16 hex digits>".
std::string fnv1a_hash(const std::string& text);

enum class Suite { Holder, Affine, Circle, C2, All };

/// Throws InputError for an unknown name.
Suite parse_suite(const std::string& name);

// Individual checks. Word lengths are clamped below a blow-up's truncation
// depth by the callers.
CheckResult check_hypothesis(const Action& action, int word_len);
/// Fixed sets of all elements inside `box` (default: hull of the generators'
/// fixed points) force every commutator to be trivial.
CheckResult check_compact_fixed_abelian(const Action& action, int word_len, std::optional<Interval> box = std::nullopt);
/// Exactly one fixed point for every nontrivial element forces commutativity.
CheckResult check_one_fixed_abelian(const Action& action, int word_len);
CheckResult check_abelian(const Action& action, int word_len);
CheckResult check_metabelian(const Action& action, int word_len, long power_bound);
CheckResult check_phi(const Action& action, const Measure& mu, int word_len, double tol);
CheckResult check_dichotomy(const Action& action, const Measure& mu, int word_len);
CheckResult check_circle(const CircleAction& action, int word_len);
CheckResult check_wandering(const ActionSpec& spec, int word_len);
CheckResult check_contrast(const ActionSpec& spec, int grid);
CheckResult check_distortion(const Action& action, int grid, double tol);

Report run_verify(const ActionSpec& spec, const std::string& spec_text, Suite suite, const RunConfig& config);
Report run_analyze(const ActionSpec& spec, const std::string& spec_text, const RunConfig& config);

/// "(A, tau)" with exact rationals when available.
std::string format_phi(const PhiResult& p);

/// CSV writers; the first line is a "# lineact <schema> v<version>" comment.
void write_theta_csv(std::ostream& os, const Measure& mu, const Interval& window, int points);
void write_distortion_csv(std::ostream& os, const std::vector<DistortionReport>& rows);
void write_orbit_csv(std::ostream& os, const OrbitGaps& gaps);

}  // namespace lineact
