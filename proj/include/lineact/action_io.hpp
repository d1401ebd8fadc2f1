#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lineact/circle.hpp"
#include "lineact/constructions.hpp"

namespace lineact {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

enum class CircleMode { None, Lifts, Compactified };

/// Everything an action file can carry.
struct ActionSpec {
  Action action;
  std::optional<MonotonePL> collapse;  // pullback measure; Lebesgue otherwise
  CircleMode circle = CircleMode::None;
  std::vector<Interval> gaps;          // known wandering candidates
  std::optional<Action> base;          // the group a blow-up models
  std::optional<int> depth;            // truncation depth of a blow-up

  /// Word length usable for certificates: below the truncation depth.
  int usable_word_len(int requested) const { return depth ? std::min(requested, *depth - 1) : requested; }

  Measure measure() const { return collapse ? Measure::pullback(*collapse) : Measure::lebesgue(); }
  /// Generators wrapped as circle lifts (circle == Lifts) or the compactified
  /// line action.
  CircleAction circle_action() const;
};

/// Throws InputError with "line L, column C" for malformed JSON.
ActionSpec parse_action_spec(const std::string& text);
ActionSpec load_action_spec(const std::filesystem::path& path);

nlohmann::json to_json(const Action& action);
nlohmann::json to_json(const ActionSpec& spec);
nlohmann::json generator_json(const std::string& name, const LineMap& map);

/// Accepts "p/q" strings, integers and decimal numbers.
Rational rational_from_json(const nlohmann::json& j);

}  // namespace lineact
