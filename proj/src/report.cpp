#include "lineact/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

namespace lineact {

using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json word_json(const Action& action, const Word& w) { return {{"word", action.format(w)}, {"length", w.length()}}; }

json fixed_json(const FixedPointReport& fp) {
  json pts = json::array(), ivs = json::array();
  if (fp.exact) {
    for (const auto& p : fp.exact_points) pts.push_back(to_string(p));
  } else {
    for (double p : fp.points) pts.push_back(p);
  }
  for (const auto& iv : fp.intervals) {
    ivs.push_back({iv.lo ? to_string(*iv.lo) : "-inf", iv.hi ? to_string(*iv.hi) : "inf"});
  }
  return {{"count", to_string(fp.count)}, {"points", pts}, {"intervals", ivs}, {"exact", fp.exact}};
}

json interval_json(const Interval& J) { return J.describe(); }

const Interval kSearch = Interval::closed(-16, 16);

FixedPointReport element_fixed_points(const LineMap& f) { return fixed_points(f, kSearch); }

// Describes why an element breaks a check's hypothesis, or nothing.
using Violation = std::function<std::optional<std::string>(const LineMap&)>;

// A non-abelian group contains a nontrivial commutator c; the elements c^m f
// and f c^m move fixed points around, so a short-word certificate of the
// hypothesis is tested against them before a falsification is declared.
std::optional<json> hypothesis_escape(const Action& action, const Word& c, const Violation& violates, long power_bound) {
  std::vector<Word> letters;
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    letters.push_back(Word::generator(static_cast<int>(g)));
    letters.push_back(Word::generator(static_cast<int>(g), -1));
  }
  auto test = [&](const Word& w) -> std::optional<json> {
    LineMap f = action.realize(w);
    if (f.is_identity()) return std::nullopt;
    if (auto why = violates(f)) {
      json out = word_json(action, w);
      out["violation"] = *why;
      return out;
    }
    return std::nullopt;
  };
  if (auto hit = test(c)) return hit;
  Word cm;
  for (long m = 1; m <= power_bound; ++m) {
    cm = cm * c;
    for (const Word& f : letters) {
      if (auto hit = test(cm * f)) return hit;
      if (auto hit = test(f * cm)) return hit;
    }
  }
  return std::nullopt;
}

CheckResult abelian_result(const Action& action, int word_len, CheckResult r, const Violation& violates) {
  AbelianResult ab = abelian_check(action, word_len);
  r.data["pairs_checked"] = ab.pairs_checked;
  r.data["abelian"] = ab.abelian;
  if (!ab.abelian) {
    const auto& [u, v] = *ab.witness;
    json witness = {{"commutator", "[" + action.format(u) + ", " + action.format(v) + "]"},
                       {"map", ab.commutator->describe()},
                       {"length", u.length() + v.length()}};
    if (auto escape = hypothesis_escape(action, lineact::commutator(u, v), violates, kDefaultPowerBound)) {
      r.verdict = Verdict::NotApplicable;
      r.data["hypothesis_fails_beyond_word_len"] = *escape;
      r.data["commutator"] = witness;
      return r;
    }
    r.verdict = Verdict::Falsified;
    r.witnesses.push_back(witness);
  }
  return r;
}

bool smooth_action(const Action& action) {
  for (const auto& g : action.generators) {
    if (const PLMap* p = g.map.as_pl(); p && !p->is_affine()) return false;
  }
  return true;
}

Interval gap_window(const ActionSpec& spec) {
  if (spec.gaps.empty()) return Interval::closed(-2, 2);
  Rational lo = *spec.gaps.front().lo, hi = *spec.gaps.front().hi;
  for (const auto& g : spec.gaps) {
    lo = std::min(lo, *g.lo);
    hi = std::max(hi, *g.hi);
  }
  return Interval::closed(floor(lo) - 1, floor(hi) + 2);
}

}  // namespace

void RunConfig::validate() const {
  if (words_max_len <= 0) throw InputError("--words-max-len must be positive");
  if (power_bound <= 0) throw InputError("--power-bound must be positive");
  if (grid <= 0) throw InputError("--grid must be positive");
  if (!(tol > 0)) throw InputError("--tol must be positive");
  if (format != "json" && format != "csv") throw InputError("--format must be json or csv");
}

json RunConfig::to_json() const {
  return {{"words_max_len", words_max_len}, {"power_bound", power_bound}, {"grid", grid},
          {"tol", tol},                     {"seed", seed},               {"format", format}};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Falsified: return "falsified";
    case Verdict::NotApplicable: return "not_applicable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool Report::falsified() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.verdict == Verdict::Falsified; });
}

json Report::to_json() const {
  std::vector<const CheckResult*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->check < b->check; });
  json list = json::array(), timing = json::object();
  for (const auto* c : sorted) {
    list.push_back({{"check", c->check},
                    {"params", c->params},
                    {"verdict", to_string(c->verdict)},
                    {"witnesses", c->witnesses},
                    {"data", c->data}});
    timing[c->check] = {{"elapsed_ms", c->elapsed_ms}};
  }
  return {{"tool", "line_actions"},
          {"command", command},
          {"subject", subject},
          {"spec_hash", spec_hash},
          {"config", config.to_json()},
          {"verdict", falsified() ? "falsified" : "pass"},
          {"exit_code", exit_code()},
          {"checks", list},
          {"timing", timing}};
}

std::string fnv1a_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Suite parse_suite(const std::string& name) {
  if (name == "holder") return Suite::Holder;
  if (name == "affine") return Suite::Affine;
  if (name == "circle") return Suite::Circle;
  if (name == "c2") return Suite::C2;
  if (name == "all") return Suite::All;
  throw InputError("unknown suite \"" + name + "\" (holder, affine, circle, c2, all)");
}

std::string format_phi(const PhiResult& p) {
  if (p.exact) return "(" + to_string(p.map.a) + ", " + to_string(p.map.b) + ")";
  return "(" + num(p.map.a.get_d()) + ", " + num(p.map.b.get_d()) + ")";
}

CheckResult check_hypothesis(const Action& action, int word_len) {
  CheckResult r{"hypothesis"};
  r.params = {{"word_len", word_len}};
  HypothesisResult h = hypothesis_check(action, word_len, kSearch);
  r.data["elements_checked"] = h.elements_checked;
  r.data["exact"] = action.all_pl();
  if (!h.pass) {
    r.verdict = Verdict::Falsified;
    json w = word_json(action, h.offender->word);
    w["fixed_points"] = fixed_json(h.offender_fixed_points);
    r.witnesses.push_back(w);
  }
  return r;
}

CheckResult check_compact_fixed_abelian(const Action& action, int word_len, std::optional<Interval> box) {
  CheckResult r{"compact_fixed_set_abelian"};
  if (!box) {
    std::optional<Rational> lo, hi;
    bool unbounded = false;
    auto widen = [&](const Rational& x) {
      if (!lo || x < *lo) lo = x;
      if (!hi || x > *hi) hi = x;
    };
    for (const auto& g : action.generators) {
      FixedPointReport fp = element_fixed_points(g.map);
      if (fp.exact) {
        for (const auto& p : fp.exact_points) widen(p);
      } else {
        for (double p : fp.points) widen(from_double(p));
      }
      for (const auto& iv : fp.intervals) {
        if (!iv.lo || !iv.hi) unbounded = true;
        if (iv.lo) widen(*iv.lo);
        if (iv.hi) widen(*iv.hi);
      }
    }
    if (unbounded) {
      r.verdict = Verdict::NotApplicable;
      r.data["reason"] = "a generator fixes an unbounded interval";
      return r;
    }
    if (lo) box = Interval{*lo, *hi, true, true};  // may be a single point
  }
  r.params = {{"word_len", word_len}, {"box", box ? box->describe() : "empty"}};

  auto inside = [&](const Rational& x) { return box && *box->lo <= x && x <= *box->hi; };
  Violation outside = [&](const LineMap& f) -> std::optional<std::string> {
    FixedPointReport fp = element_fixed_points(f);
    std::optional<std::string> out;
    if (fp.exact) {
      for (const auto& p : fp.exact_points) {
        if (!inside(p)) out = to_string(p);
      }
    } else {
      for (double p : fp.points) {
        if (!box || p < box->lo->get_d() - kNumericTolerance || p > box->hi->get_d() + kNumericTolerance) out = num(p);
      }
    }
    for (const auto& iv : fp.intervals) {
      if (!iv.lo || !iv.hi || !inside(*iv.lo) || !inside(*iv.hi)) out = "fixed interval";
    }
    if (out) out = "fixed point " + *out + " outside the box";
    return out;
  };
  for (const auto& e : enumerate_elements(action, word_len)) {
    if (e.map.is_identity()) continue;
    if (auto why = outside(e.map)) {
      r.verdict = Verdict::NotApplicable;
      json w = word_json(action, e.word);
      w["violation"] = *why;
      r.data["outside_box"] = w;
      return r;
    }
  }
  return abelian_result(action, word_len, std::move(r), outside);
}

CheckResult check_one_fixed_abelian(const Action& action, int word_len) {
  CheckResult r{"one_fixed_point_abelian"};
  r.params = {{"word_len", word_len}};
  Violation not_one = [](const LineMap& f) -> std::optional<std::string> {
    FixedPointReport fp = element_fixed_points(f);
    if (fp.count == FixedCount::One) return std::nullopt;
    return fixed_json(fp).dump();
  };
  for (const auto& e : enumerate_elements(action, word_len)) {
    if (e.map.is_identity()) continue;
    FixedPointReport fp = element_fixed_points(e.map);
    if (fp.count != FixedCount::One) {
      r.verdict = Verdict::NotApplicable;
      json w = word_json(action, e.word);
      w["fixed_points"] = fixed_json(fp);
      r.data["not_one_fixed_point"] = w;
      return r;
    }
  }
  return abelian_result(action, word_len, std::move(r), not_one);
}

CheckResult check_abelian(const Action& action, int word_len) {
  CheckResult r{"abelian"};
  r.params = {{"word_len", word_len}};
  AbelianResult ab = abelian_check(action, word_len);
  r.data["abelian"] = ab.abelian;
  r.data["pairs_checked"] = ab.pairs_checked;
  if (!ab.abelian) {
    const auto& [u, v] = *ab.witness;
    r.data["commutator"] = {{"word", "[" + action.format(u) + ", " + action.format(v) + "]"},
                            {"map", ab.commutator->describe()}};
  }
  return r;
}

CheckResult check_metabelian(const Action& action, int word_len, long power_bound) {
  CheckResult r{"metabelian"};
  r.params = {{"word_len", word_len}, {"power_bound", power_bound}};
  if (!action.all_pl()) {
    r.verdict = Verdict::Inconclusive;
    r.data["reason"] = "requires piecewise-affine generators";
    return r;
  }
  try {
    MetabelianResult m = metabelian_check(action, word_len, power_bound);
    r.data["commutators"] = m.commutators;
    r.data["pairs_checked"] = m.pairs_checked;
    r.data["infinitesimal_checked"] = m.infinitesimal_checked;
    json sample = json::array();
    for (std::size_t i = 0; i < m.sampled_commutators.size() && i < 10; ++i) {
      sample.push_back({{"word", action.format(m.sampled_commutators[i].word)},
                        {"map", m.sampled_commutators[i].map.describe()}});
    }
    r.data["sampled_commutators"] = sample;
    if (!m.pass) {
      r.verdict = Verdict::Falsified;
      json w = {{"failure", m.failure}};
      if (m.witness) w["pair"] = {action.format(m.witness->first), action.format(m.witness->second)};
      r.witnesses.push_back(w);
    }
  } catch (const HypothesisViolation& e) {
    r.verdict = Verdict::Falsified;
    json w = word_json(action, e.word());
    w["failure"] = e.what();
    r.witnesses.push_back(w);
  }
  return r;
}

namespace {

json phi_json(const PhiResult& p) {
  auto field = [&](const Rational& q) -> json { return p.exact ? json(to_string(q)) : json(q.get_d()); };
  return {{"a", field(p.map.a)}, {"b", field(p.map.b)}, {"phi", format_phi(p)}, {"exact", p.exact}};
}

}  // namespace

CheckResult check_phi(const Action& action, const Measure& mu, int word_len, double tol) {
  CheckResult r{"phi"};
  int len = std::min(word_len, 3);
  r.params = {{"measure", mu.kind()}, {"homomorphism_word_len", len}};
  try {
    json gens = json::array();
    for (const auto& g : action.generators) {
      PhiResult p = phi(mu, g.map);
      json item = phi_json(p);
      item["generator"] = g.name;
      gens.push_back(item);
    }
    r.data["generators"] = gens;

    std::vector<Element> elems = enumerate_elements(action, len, {.include_identity = false, .dedup = action.all_pl()});
    if (elems.size() > 20) elems.resize(20);
    std::vector<PhiResult> phis;
    for (const auto& e : elems) phis.push_back(phi(mu, e.map));
    std::size_t pairs = 0;
    double slack = std::max(tol, mu.tolerance());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        ++pairs;
        PhiResult uv = phi(mu, compose(elems[i].map, elems[j].map));
        AffineMap expect = phis[i].map * phis[j].map;
        bool ok;
        if (uv.exact && phis[i].exact && phis[j].exact) {
          ok = uv.map == expect;
        } else {
          double da = std::abs(uv.map.a.get_d() - expect.a.get_d());
          double db = std::abs(uv.map.b.get_d() - expect.b.get_d());
          ok = da <= slack * std::max(1.0, std::abs(expect.a.get_d())) &&
               db <= slack * std::max(1.0, std::abs(expect.b.get_d()));
        }
        if (!ok) {
          // The measure, not the action, is at fault.
          r.verdict = Verdict::Inconclusive;
          r.data["reason"] = "measure not quasi-invariant: phi is not a homomorphism on the sample";
          r.data["mismatch"] = {{"u", action.format(elems[i].word)},
                                {"v", action.format(elems[j].word)},
                                {"phi_uv", format_phi(uv)},
                                {"phi_u_phi_v", format_phi({expect, uv.exact})}};
          r.data["homomorphism_pairs"] = pairs;
          return r;
        }
      }
    }
    r.data["homomorphism_pairs"] = pairs;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    r.verdict = Verdict::Inconclusive;
    r.data["reason"] = e.what();
  }
  return r;
}

CheckResult check_dichotomy(const Action& action, const Measure& mu, int word_len) {
  CheckResult r{"kernel_dichotomy"};
  int len = std::min(word_len, 3);
  r.params = {{"measure", mu.kind()}, {"word_len", len}};
  try {
    std::size_t checked = 0;
    json kernel = json::array();
    for (const auto& e : enumerate_elements(action, len, {.include_identity = false, .dedup = action.all_pl()})) {
      DichotomyReport d = kernel_fixed_point_dichotomy(mu, e.map);
      ++checked;
      if (!d.consistent) {
        r.verdict = Verdict::Falsified;
        json w = word_json(action, e.word);
        w["fixed"] = to_string(d.fixed);
        w["A"] = d.scaling;
        r.witnesses.push_back(w);
        break;
      }
      if (!d.trivial && d.fixed == FixedCount::Zero && e.word.length() <= 2 && kernel.size() < 12) {
        TranslationNumber t = translation_number(mu, e.map);
        kernel.push_back({{"word", action.format(e.word)}, {"tau", t.exact ? to_string(*t.exact) : num(t.value)}});
      }
    }
    r.data["elements_checked"] = checked;
    r.data["kernel_translation_numbers"] = kernel;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    r.verdict = Verdict::Inconclusive;
    r.data["reason"] = e.what();
  }
  return r;
}

CheckResult check_circle(const CircleAction& action, int word_len) {
  CheckResult r{"circle_dichotomy"};
  r.params = {{"word_len", word_len}, {"form", action.compactified ? "compactified" : "lifts"}};
  CircleVerdict v = circle_dichotomy_check(action, word_len);
  r.data["kind"] = to_string(v.kind);
  r.data["words_checked"] = v.words_checked;
  r.data["detail"] = v.detail;
  if (!v.point_label.empty()) {
    r.data["point"] = v.point_label;
  } else if (v.point) {
    r.data["point"] = *v.point;
  }
  if (v.kind == CircleVerdict::Kind::HypothesisViolated || v.kind == CircleVerdict::Kind::Falsified) {
    r.verdict = Verdict::Falsified;
    json w = {{"detail", v.detail}};
    if (v.word) {
      w["word"] = *v.word;
      long len = 0;
      for (char c : *v.word) len += c == ' ' ? 1 : 0;
      w["letters"] = len + 1;
    }
    r.witnesses.push_back(w);
  }
  return r;
}

CheckResult check_wandering(const ActionSpec& spec, int word_len) {
  CheckResult r{"wandering"};
  r.params = {{"word_len", word_len}, {"candidates", spec.gaps.size()}, {"judged_in_base", spec.base.has_value()}};
  if (spec.gaps.empty()) {
    r.verdict = Verdict::NotApplicable;
    r.data["reason"] = "no candidate intervals";
    return r;
  }
  WanderingResult w = wandering_interval_search(spec.action, word_len, spec.gaps, spec.base ? &*spec.base : nullptr);
  json inventory = json::array();
  std::size_t wandering = 0;
  for (const auto& c : w.candidates) {
    json item = {{"J", interval_json(c.J)},
                 {"wandering", c.wandering},
                 {"words_checked", c.words_checked},
                 {"trivial_words", c.trivial_words}};
    if (c.blocker) item["blocker"] = spec.action.format(*c.blocker);
    inventory.push_back(item);
    wandering += c.wandering;
  }
  r.data["inventory"] = inventory;
  r.data["wandering_count"] = wandering;
  bool smooth = smooth_action(spec.action);
  r.data["smooth_generators"] = smooth;
  if (w.found && smooth && !abelian_check(spec.action, 2).abelian) {
    r.verdict = Verdict::Falsified;
    r.witnesses.push_back({{"J", interval_json(*w.J)}, {"word_len", word_len}});
  }
  return r;
}

CheckResult check_contrast(const ActionSpec& spec, int grid) {
  CheckResult r{"conjugacy_contrast"};
  if (!spec.collapse) {
    r.verdict = Verdict::NotApplicable;
    r.data["reason"] = "no pullback measure";
    return r;
  }
  Interval window = gap_window(spec);
  r.params = {{"window", window.describe()}, {"grid", grid}};
  ContrastReport c = conjugacy_contrast_report(Measure::lebesgue(), spec.measure(), window, grid);
  json fibers = json::array();
  for (std::size_t i = 0; i < c.blowup.fibers.size() && i < 20; ++i) fibers.push_back(c.blowup.fibers[i].describe());
  r.data = {{"smooth_min_increment", c.smooth.min_increment},
            {"smooth_refined_min_increment", c.smooth_refined.min_increment},
            {"smooth_injective", c.smooth_injective},
            {"blowup_fiber_count", c.blowup.fibers.size()},
            {"blowup_fibers", fibers},
            {"contrast", c.contrast()}};
  return r;
}

CheckResult check_distortion(const Action& action, int grid, double tol) {
  CheckResult r{"distortion"};
  Interval J = Interval::closed(0, Rational(1, 10));
  r.params = {{"J", J.describe()}, {"n_max", 50}, {"grid", grid}};
  json rows = json::array();
  for (const auto& g : action.generators) {
    if (!g.map.as_sine()) continue;
    auto rep = distortion_sum_check(g.map, J, 50, grid);
    double min_margin = rep.front().margin;
    long worst = rep.front().n;
    for (const auto& row : rep) {
      if (row.margin < min_margin) {
        min_margin = row.margin;
        worst = row.n;
      }
    }
    rows.push_back({{"generator", g.name}, {"C", rep.front().C}, {"min_margin", min_margin}, {"worst_n", worst}});
    if (min_margin < -tol) {
      r.verdict = Verdict::Falsified;
      r.witnesses.push_back({{"generator", g.name}, {"n", worst}, {"margin", min_margin}});
    }
  }
  if (rows.empty()) {
    r.verdict = Verdict::NotApplicable;
    r.data["reason"] = "no sine-perturbed generators";
  }
  r.data["generators"] = rows;
  return r;
}

namespace {

void timed(Report& rep, const std::string& name, const std::function<CheckResult()>& fn) {
  auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = fn();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    r = CheckResult{name};
    r.verdict = Verdict::Inconclusive;
    r.data["reason"] = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rep.checks.push_back(std::move(r));
}

}  // namespace

Report run_verify(const ActionSpec& spec, const std::string& spec_text, Suite suite, const RunConfig& config) {
  config.validate();
  Report rep;
  rep.command = "verify";
  rep.config = config;
  rep.spec_hash = fnv1a_hash(spec_text);
  const char* names[] = {"holder", "affine", "circle", "c2", "all"};
  rep.subject = names[static_cast<int>(suite)];
  const int L = spec.usable_word_len(config.words_max_len);
  const Action& a = spec.action;
  const bool all = suite == Suite::All;
  const Measure mu = spec.measure();

  if (suite != Suite::Circle && suite != Suite::C2) timed(rep, "hypothesis", [&] { return check_hypothesis(a, L); });
  if (all || suite == Suite::Holder) {
    timed(rep, "compact_fixed_set_abelian", [&] { return check_compact_fixed_abelian(a, L); });
    timed(rep, "one_fixed_point_abelian", [&] { return check_one_fixed_abelian(a, L); });
    timed(rep, "abelian", [&] { return check_abelian(a, L); });
  }
  if (all || suite == Suite::Affine) {
    timed(rep, "metabelian", [&] {
      if (spec.depth) {
        // Commutator products run far past the depth the hypothesis was verified to.
        CheckResult r{"metabelian"};
        r.verdict = Verdict::NotApplicable;
        r.data["reason"] = "truncated blow-up only models its base group below the truncation depth";
        return r;
      }
      return check_metabelian(a, L, config.power_bound);
    });
    timed(rep, "phi", [&] { return check_phi(a, mu, L, config.tol); });
    timed(rep, "kernel_dichotomy", [&] { return check_dichotomy(a, mu, L); });
  }
  if (all || suite == Suite::Circle) {
    timed(rep, "circle_dichotomy", [&] {
      if (spec.circle == CircleMode::None) {
        CheckResult r{"circle_dichotomy"};
        r.verdict = Verdict::NotApplicable;
        r.data["reason"] = "action has no circle form";
        return r;
      }
      return check_circle(spec.circle_action(), L);
    });
  }
  if (all || suite == Suite::C2) {
    timed(rep, "wandering", [&] { return check_wandering(spec, L); });
    timed(rep, "conjugacy_contrast", [&] { return check_contrast(spec, config.grid); });
    timed(rep, "distortion", [&] { return check_distortion(a, config.grid, config.tol); });
  }
  if (spec.depth) {
    for (auto& c : rep.checks) {
      c.params["truncation_depth"] = *spec.depth;
      c.params["construction"] = kBlowupLabel;
    }
  }
  return rep;
}

Report run_analyze(const ActionSpec& spec, const std::string& spec_text, const RunConfig& config) {
  config.validate();
  Report rep;
  rep.command = "analyze";
  rep.subject = spec.action.name;
  rep.config = config;
  rep.spec_hash = fnv1a_hash(spec_text);
  const int L = spec.usable_word_len(config.words_max_len);
  const Action& a = spec.action;
  const Measure mu = spec.measure();

  timed(rep, "order_table", [&] {
    CheckResult r{"order_table"};
    int len = std::min(L, 2);
    std::vector<Element> elems = enumerate_elements(a, len, {.include_identity = true, .dedup = a.all_pl()});
    if (elems.size() > 12) elems.resize(12);
    r.params = {{"word_len", len}, {"elements", elems.size()}};
    json rows = json::array();
    for (const auto& u : elems) {
      json row = {{"word", a.format(u.word)}};
      json rel = json::array();
      for (const auto& v : elems) {
        try {
          rel.push_back(to_string(compare(u.map, v.map).relation));
        } catch (const Error&) {
          rel.push_back("undecided");
        }
      }
      row["relations"] = rel;
      rows.push_back(row);
    }
    r.data["rows"] = rows;
    return r;
  });
  timed(rep, "infinitesimal_subgroup", [&] {
    CheckResult r{"infinitesimal_subgroup"};
    int len = std::min(L, 4);
    r.params = {{"word_len", len}, {"power_bound", config.power_bound}};
    try {
      InfinitesimalSample s = infinitesimal_subgroup_sample(a, len, config.power_bound);
      json members = json::array();
      for (std::size_t i = 0; i < s.members.size() && i < 40; ++i) members.push_back(a.format(s.members[i].word));
      r.data = {{"free_action", s.free_action},
                {"members", members},
                {"member_count", s.members.size()},
                {"exact", s.exact},
                {"reference_independent", s.reference_independent},
                {"notes", s.independence_notes}};
      if (s.reference) r.data["reference"] = a.format(s.reference->word);
    } catch (const HypothesisViolation& e) {
      r.verdict = Verdict::Falsified;
      json w = word_json(a, e.word());
      w["failure"] = e.what();
      r.witnesses.push_back(w);
    }
    return r;
  });
  timed(rep, "generators", [&] {
    CheckResult r{"generators"};
    r.params = {{"measure", mu.kind()}, {"normalization", mu.normalization()}};
    json gens = json::array();
    for (const auto& g : a.generators) {
      json item = {{"generator", g.name}, {"map", g.map.describe()}};
      try {
        PhiResult p = phi(mu, g.map);
        item.update(phi_json(p));
        if (p.map.a == 1 || (!p.exact && std::abs(p.map.a.get_d() - 1) <= mu.tolerance())) {
          TranslationNumber t = translation_number(mu, g.map);
          item["tau"] = t.exact ? to_string(*t.exact) : num(t.value);
        }
      } catch (const Error& e) {
        item["error"] = e.what();
      }
      gens.push_back(item);
    }
    r.data["generators"] = gens;
    return r;
  });
  timed(rep, "theta", [&] {
    CheckResult r{"theta"};
    Interval window = gap_window(spec);
    const int points = 65;
    r.params = {{"window", window.describe()}, {"points", points}};
    json samples = json::array();
    double lo = window.lo->get_d(), hi = window.hi->get_d();
    for (int i = 0; i < points; ++i) {
      double x = lo + (hi - lo) * i / (points - 1);
      samples.push_back({x, theta(mu, x)});
    }
    r.data["samples"] = samples;
    return r;
  });
  return rep;
}

void write_theta_csv(std::ostream& os, const Measure& mu, const Interval& window, int points) {
  os << "# lineact theta v1 measure=" << mu.kind() << "\n";
  os << "x,theta\n";
  double lo = window.lo->get_d(), hi = window.hi->get_d();
  for (int i = 0; i < points; ++i) {
    double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    os << num(x) << "," << num(theta(mu, x)) << "\n";
  }
}

void write_distortion_csv(std::ostream& os, const std::vector<DistortionReport>& rows) {
  os << "# lineact distortion v1\n";
  os << "n,dist,orbit_sum,C,bound,margin,chain_sum,chain_ok\n";
  for (const auto& r : rows) {
    os << r.n << "," << num(r.dist) << "," << num(r.orbit_sum) << "," << num(r.C) << "," << num(r.bound) << ","
       << num(r.margin) << "," << num(r.chain_sum) << "," << (r.chain_ok ? 1 : 0) << "\n";
  }
}

void write_orbit_csv(std::ostream& os, const OrbitGaps& gaps) {
  os << "# lineact orbit v1 largest_gap=" << num(gaps.largest_gap) << " gap_start=" << num(gaps.gap_start) << "\n";
  os << "k,point\n";
  for (std::size_t k = 0; k < gaps.points.size(); ++k) os << k << "," << num(gaps.points[k]) << "\n";
}

}  // namespace lineact
