#include "lineact/action_io.hpp"

#include <fstream>
#include <sstream>

namespace lineact {

using nlohmann::json;

namespace {

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::vector<Rational> rational_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  return rational_from_json(j).get_d();
}

LineMap generator_map(const json& g, const std::string& where) {
  const std::string kind = field(g, "kind", where).get<std::string>();
  if (kind == "affine") {
    Rational a = rational_from_json(field(g, "a", where));
    if (a <= 0) throw InputError(where + ": affine slope must be positive");
    return LineMap::affine(a, rational_from_json(field(g, "b", where)));
  }
  if (kind == "pl") {
    std::vector<Rational> bps = rational_list(field(g, "breakpoints", where), where + ".breakpoints");
    std::vector<Rational> slopes = rational_list(field(g, "slopes", where), where + ".slopes");
    std::vector<Rational> anchor = rational_list(field(g, "anchor", where), where + ".anchor");
    if (anchor.size() != 2) throw InputError(where + ": anchor must be [x0, y0]");
    return PLMap::from_slopes(bps, slopes, {anchor[0], anchor[1]});
  }
  if (kind == "sine_perturbed_translation") {
    return LineMap::sine_perturbed_translation(real_from_json(field(g, "c", where)),
                                               real_from_json(field(g, "eps", where)));
  }
  throw InputError(where + ": unknown generator kind \"" + kind + "\"");
}

Action action_from_json(const json& j, const std::string& where) {
  Action out;
  out.name = j.value("name", std::string("action"));
  const json& gens = field(j, "generators", where);
  if (!gens.is_array() || gens.empty()) throw InputError(where + ": generators must be a non-empty array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string gw = where + ".generators[" + std::to_string(i) + "]";
    std::string name = gens[i].value("name", "g" + std::to_string(i));
    try {
      out.generators.push_back({name, generator_map(gens[i], gw)});
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(gw + ": " + e.what());
    }
  }
  return out;
}

json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  throw InputError("expected a rational, got " + j.dump());
}

json generator_json(const std::string& name, const LineMap& map) {
  if (const PLMap* p = map.as_pl()) {
    if (p->is_affine()) {
      return {{"name", name}, {"kind", "affine"}, {"a", rational_json(p->germ().slope)}, {"b", rational_json(p->germ().intercept)}};
    }
    json bps = json::array(), slopes = json::array();
    for (const auto& b : p->breakpoints()) bps.push_back(rational_json(b));
    for (const auto& piece : p->pieces()) slopes.push_back(rational_json(piece.slope));
    return {{"name", name},
            {"kind", "pl"},
            {"breakpoints", bps},
            {"slopes", slopes},
            {"anchor", {rational_json(0), rational_json((*p)(Rational(0)))}}};
  }
  if (const SineMap* s = map.as_sine(); s && !s->inverted) {
    return {{"name", name}, {"kind", "sine_perturbed_translation"}, {"c", s->c}, {"eps", s->eps}};
  }
  throw Error("generator " + name + " has no serializable form: " + map.describe());
}

json to_json(const Action& action) {
  json gens = json::array();
  for (const auto& g : action.generators) gens.push_back(generator_json(g.name, g.map));
  return {{"name", action.name}, {"generators", gens}};
}

json to_json(const ActionSpec& spec) {
  json out = to_json(spec.action);
  if (spec.collapse) {
    json knots = json::array();
    for (const auto& [x, y] : spec.collapse->knots()) knots.push_back({rational_json(x), rational_json(y)});
    out["measure"] = {{"kind", "pullback"},
                      {"knots", knots},
                      {"left_slope", rational_json(spec.collapse->left_slope())},
                      {"right_slope", rational_json(spec.collapse->right_slope())}};
  }
  if (spec.circle == CircleMode::Lifts) out["circle"] = "lifts";
  if (spec.circle == CircleMode::Compactified) out["circle"] = "compactified";
  if (!spec.gaps.empty()) {
    json gaps = json::array();
    for (const auto& g : spec.gaps) gaps.push_back({rational_json(*g.lo), rational_json(*g.hi)});
    out["gaps"] = gaps;
  }
  if (spec.base) out["base"] = to_json(*spec.base);
  if (spec.depth) out["depth"] = *spec.depth;
  return out;
}

ActionSpec parse_action_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("action spec must be a JSON object");
  ActionSpec spec;
  try {
    spec.action = action_from_json(j, "action");
    if (j.contains("measure")) {
      const json& m = j["measure"];
      std::string kind = field(m, "kind", "measure").get<std::string>();
      if (kind == "pullback") {
        std::vector<std::pair<Rational, Rational>> knots;
        for (const auto& k : field(m, "knots", "measure")) {
          if (!k.is_array() || k.size() != 2) throw InputError("measure.knots entries must be [x, y]");
          knots.push_back({rational_from_json(k[0]), rational_from_json(k[1])});
        }
        spec.collapse = MonotonePL(knots, rational_from_json(m.value("left_slope", json("1"))),
                                   rational_from_json(m.value("right_slope", json("1"))));
      } else if (kind != "lebesgue") {
        throw InputError("measure.kind must be lebesgue or pullback");
      }
    }
    if (j.contains("circle")) {
      std::string c = j["circle"].get<std::string>();
      if (c == "lifts") {
        spec.circle = CircleMode::Lifts;
      } else if (c == "compactified") {
        spec.circle = CircleMode::Compactified;
      } else {
        throw InputError("circle must be \"lifts\" or \"compactified\"");
      }
    }
    if (j.contains("gaps")) {
      for (const auto& g : j["gaps"]) {
        if (!g.is_array() || g.size() != 2) throw InputError("gaps entries must be [lo, hi]");
        spec.gaps.push_back(Interval::closed(rational_from_json(g[0]), rational_from_json(g[1])));
      }
    }
    if (j.contains("base")) spec.base = action_from_json(j["base"], "base");
    if (j.contains("depth")) {
      spec.depth = j["depth"].get<int>();
      if (*spec.depth < 1) throw InputError("depth must be positive");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid action spec: ") + e.what());
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (spec.circle == CircleMode::Lifts) {
    try {
      spec.circle_action();
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  return spec;
}

ActionSpec load_action_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_action_spec(ss.str());
}

CircleAction ActionSpec::circle_action() const {
  CircleAction out;
  out.name = action.name;
  if (circle == CircleMode::Compactified) {
    out.compactified = action;
    return out;
  }
  for (const auto& g : action.generators) out.lifts.push_back({g.name, quotient_commuting_element(g.map)});
  return out;
}

}  // namespace lineact
