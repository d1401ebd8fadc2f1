#include "lineact/order.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "lineact/parallel.hpp"

namespace lineact {

namespace {

// Germ of f^n, computed from the germ of f alone (germs at +infinity compose).
Germ germ_power(const Germ& g, long n) {
  if (n == 0) return {1, 0};
  Germ base = g;
  if (n < 0) {
    base = {1 / g.slope, -g.intercept / g.slope};
    n = -n;
  }
  if (base.slope == 1) return {1, base.intercept * n};
  Rational sn = pow(base.slope, n);
  return {sn, base.intercept * (sn - 1) / (base.slope - 1)};
}

Relation germ_relation(const Germ& a, const Germ& b) {
  if (a == b) return Relation::Equal;
  return a < b ? Relation::Less : Relation::Greater;
}

double max_abs_breakpoint(const LineMap& f) {
  double m = 0.0;
  for (const auto& a : f.atoms()) {
    if (const auto* p = std::get_if<PLMap>(&a)) {
      for (const auto& b : p->breakpoints()) m = std::max(m, std::abs(b.get_d()));
    }
  }
  return m;
}

OrderResult compare_numeric(const LineMap& g, const LineMap& h) {
  OrderResult out;
  if (g == h) {
    out.relation = Relation::Equal;
    out.identical = true;
    return out;
  }
  const double x0 = 1024.0 + std::max(max_abs_breakpoint(g), max_abs_breakpoint(h));
  constexpr int kSamples = 4096;
  constexpr double kWidth = 4.0;
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= kSamples; ++i) {
    double x = x0 + kWidth * i / kSamples;
    double d = g(x) - h(x);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (lo > kNumericTolerance) {
    out.relation = Relation::Greater;
  } else if (hi < -kNumericTolerance) {
    out.relation = Relation::Less;
  } else {
    throw Error("order undecided at tolerance");
  }
  out.threshold = x0;
  return out;
}

bool numerically_identity(const LineMap& f) {
  if (f.is_pl()) return f.is_identity();
  for (int i = -512; i <= 512; ++i) {
    double x = i / 64.0;
    if (std::abs(f(x) - x) > kNumericTolerance) return false;
  }
  return true;
}

// Positive representative of an element (itself or its inverse).
Element positive_version(const Element& e) {
  if (is_positive(e.map)) return e;
  return {e.word.inverse(), invert(e.map)};
}

FixedPointReport fixed_points_default(const LineMap& f) { return fixed_points(f, Interval::closed(-16, 16)); }

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Greater:
      return "Greater";
    case Relation::Less:
      return "Less";
    case Relation::Equal:
      return "Equal";
  }
  return "?";
}

OrderResult compare(const LineMap& g, const LineMap& h) {
  if (!g.is_pl() || !h.is_pl()) return compare_numeric(g, h);
  const PLMap& pg = g.pl();
  const PLMap& ph = h.pl();
  OrderResult out;
  out.exact = true;
  if (pg == ph) {
    out.relation = Relation::Equal;
    out.identical = true;
    return out;
  }
  const Germ gg = pg.germ();
  const Germ gh = ph.germ();
  out.relation = germ_relation(gg, gh);
  if (out.relation == Relation::Equal) return out;
  std::optional<Rational> far;
  auto bump = [&far](const Rational& x) {
    if (!far || x > *far) far = x;
  };
  for (const auto& b : pg.breakpoints()) bump(b);
  for (const auto& b : ph.breakpoints()) bump(b);
  if (gg.slope != gh.slope) bump((gh.intercept - gg.intercept) / (gg.slope - gh.slope));
  out.exact_threshold = far ? *far + 1 : Rational(0);
  out.threshold = out.exact_threshold->get_d();
  return out;
}

bool is_positive(const LineMap& g) { return compare(g, LineMap::identity()).relation == Relation::Greater; }

Commensurability commensurate(const LineMap& g, const LineMap& h, long power_bound) {
  if (g.is_identity() || h.is_identity()) throw Error("commensurability needs nontrivial elements");
  Commensurability out;
  if (g.is_pl() && h.is_pl()) {
    const Germ gg = g.pl().germ();
    const Germ gh = h.pl().germ();
    if (gg.is_identity() || gh.is_identity()) {
      out.proof = true;
      out.reason = "an element with the identity germ at +infinity has no power exceeding any positive element";
      return out;
    }
    if ((gg.slope == 1) != (gh.slope == 1)) {
      out.proof = true;
      out.reason = "powers of a slope-1 germ never pass a germ of slope != 1";
      return out;
    }
    // Sandwich s^-k < t < s^k for the positive orientation of s.
    auto least_power = [&](const Germ& s, const Germ& t) -> std::optional<long> {
      const bool positive = s > Germ{1, 0};
      for (long k = 1; k <= power_bound; ++k) {
        long e = positive ? k : -k;
        if (germ_power(s, -e) < t && t < germ_power(s, e)) return e;
      }
      return std::nullopt;
    };
    auto n = least_power(gg, gh);
    auto m = least_power(gh, gg);
    if (n && m) {
      out.yes = true;
      out.n = *n;
      out.m = *m;
    } else {
      out.reason = "power bound exhausted";
    }
    return out;
  }
  auto least_power = [&](const LineMap& s, const LineMap& t) -> std::optional<long> {
    const bool positive = is_positive(s);
    LineMap step = positive ? s : invert(s);
    LineMap up = step;
    for (long k = 1; k <= power_bound; ++k) {
      if (compare(invert(up), t).relation == Relation::Less && compare(t, up).relation == Relation::Less) {
        return positive ? k : -k;
      }
      up = compose(up, step);
    }
    return std::nullopt;
  };
  auto n = least_power(g, h);
  auto m = least_power(h, g);
  if (n && m) {
    out.yes = true;
    out.n = *n;
    out.m = *m;
  } else {
    out.reason = "power bound exhausted";
  }
  return out;
}

long dominating_power(const LineMap& h, const LineMap& g, long power_bound) {
  if (!is_positive(g)) throw Error("dominating_power needs a positive g");
  if (h.is_identity()) throw Error("dominating_power needs a nontrivial h");
  if (fixed_points_default(h).count == FixedCount::Zero) throw Error("dominating_power needs h with a fixed point");
  if (h.is_pl() && g.is_pl()) {
    const Germ gh = h.pl().germ();
    const Germ gg = g.pl().germ();
    const Germ ginv = germ_power(gg, -1);
    for (long k = 1; k <= power_bound; ++k) {
      for (long n : {k, -k}) {
        if (germ_power(gh, n) > gg && germ_power(gh, -n) < ginv) return n;
      }
    }
  } else {
    LineMap ginv = invert(g);
    for (long k = 1; k <= power_bound; ++k) {
      for (long n : {k, -k}) {
        LineMap hn = power(h, n);
        if (compare(hn, g).relation == Relation::Greater && compare(invert(hn), ginv).relation == Relation::Less) return n;
      }
    }
  }
  throw Error("dominating power bound exhausted: no |n| <= " + std::to_string(power_bound) +
              " with h^n > g (possible hypothesis violation)");
}

InfinitesimalResult is_infinitesimal(const LineMap& h, const LineMap& g, long power_bound) {
  if (!is_positive(g)) throw Error("infinitesimal test needs a positive reference element");
  InfinitesimalResult out;
  if (h.is_identity()) {
    out.yes = true;
    out.exact = h.is_pl();
    return out;
  }
  if (h.is_pl() && g.is_pl()) {
    out.exact = true;
    const Germ gh = h.pl().germ();
    const Germ gg = g.pl().germ();
    const Germ ginv = germ_power(gg, -1);
    auto escapes = [&](long n) {
      Germ p = germ_power(gh, n);
      return !(p < gg) || !(ginv < p);
    };
    if (gh.slope != 1) {
      for (long k = 1;; ++k) {
        if (escapes(k)) {
          out.witness = k;
          return out;
        }
        if (escapes(-k)) {
          out.witness = -k;
          return out;
        }
      }
    }
    if (gh.intercept == 0 || gg.slope != 1) {
      out.yes = true;
      return out;
    }
    // both germs are translations: h^n escapes once |n * t_h| >= t_g
    Rational ratio = gg.intercept / abs(gh.intercept);
    mpz_class n;
    mpz_cdiv_q(n.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
    long k = std::max<long>(1, n.get_si());
    out.witness = gh.intercept > 0 ? k : -k;
    return out;
  }
  LineMap ginv = invert(g);
  for (long k = 1; k <= power_bound; ++k) {
    for (long n : {k, -k}) {
      LineMap hn = power(h, n);
      if (compare(hn, g).relation != Relation::Less || compare(ginv, hn).relation != Relation::Less) {
        out.witness = n;
        return out;
      }
    }
  }
  out.yes = true;
  return out;
}

HypothesisResult hypothesis_check(const Action& action, int word_len, const Interval& search) {
  std::vector<Element> elements = enumerate_elements(action, word_len);
  std::vector<FixedPointReport> reports(elements.size());
  std::vector<char> trivial(elements.size(), 0);
  parallel_for(elements.size(), [&](std::size_t i) {
    if (elements[i].map.is_identity() || (!elements[i].map.is_pl() && numerically_identity(elements[i].map))) {
      trivial[i] = 1;
      return;
    }
    reports[i] = fixed_points(elements[i].map, search);
  });
  HypothesisResult out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (trivial[i]) continue;
    ++out.elements_checked;
    if (reports[i].count == FixedCount::TwoOrMore) {
      out.pass = false;
      out.offender = elements[i];
      out.offender_fixed_points = reports[i];
      out.elements_checked = i + 1;
      return out;
    }
  }
  return out;
}

InfinitesimalSample infinitesimal_subgroup_sample(const Action& action, int word_len, long power_bound) {
  std::vector<Element> elements = enumerate_elements(action, word_len, {.include_identity = true});
  std::vector<FixedCount> counts(elements.size(), FixedCount::Zero);
  parallel_for(elements.size(), [&](std::size_t i) {
    if (!elements[i].map.is_identity()) counts[i] = fixed_points_default(elements[i].map).count;
  });
  std::vector<std::size_t> with_fixed_point;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (counts[i] == FixedCount::TwoOrMore) {
      throw HypothesisViolation("element " + action.format(elements[i].word) + " has two or more fixed points",
                                elements[i].word);
    }
    if (counts[i] == FixedCount::One) with_fixed_point.push_back(i);
  }
  InfinitesimalSample out;
  out.exact = action.all_pl();
  if (with_fixed_point.empty()) {
    out.free_action = true;
    out.members = std::move(elements);
    return out;
  }
  auto membership = [&](const LineMap& g) {
    std::vector<char> in(elements.size(), 0);
    parallel_for(elements.size(), [&](std::size_t i) { in[i] = is_infinitesimal(elements[i].map, g, power_bound).yes; });
    return in;
  };
  Element reference = positive_version(elements[with_fixed_point.front()]);
  std::vector<char> in = membership(reference.map);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (in[i]) out.members.push_back(elements[i]);
  }
  // I(g) must not depend on the reference element.
  auto check = [&](const LineMap& g, const std::string& label) {
    if (membership(g) != in) {
      out.reference_independent = false;
      out.independence_notes.push_back("membership differs for reference " + label);
    }
  };
  check(power(reference.map, 2), "g^2");
  check(power(reference.map, 3), "g^3");
  for (std::size_t k = 1; k < with_fixed_point.size() && k <= 3; ++k) {
    Element alt = positive_version(elements[with_fixed_point[k]]);
    check(alt.map, action.format(alt.word));
  }
  out.reference = std::move(reference);
  return out;
}

std::string to_string(CommuteResult::Kind k) {
  switch (k) {
    case CommuteResult::Kind::FreePair:
      return "Commute(FreePair)";
    case CommuteResult::Kind::CommonFixedPoint:
      return "Commute(CommonFixedPoint)";
    case CommuteResult::Kind::CommuteOther:
      return "Commute(Other)";
    case CommuteResult::Kind::NotCommute:
      return "NotCommute";
  }
  return "?";
}

CommuteResult commute_classify(const LineMap& g, const LineMap& h) {
  CommuteResult out;
  LineMap gh = compose(g, h);
  LineMap hg = compose(h, g);
  if (gh.is_pl() && hg.is_pl()) {
    if (!(gh == hg)) {
      out.kind = CommuteResult::Kind::NotCommute;
      std::vector<Rational> probes = gh.pl().probe_points();
      for (auto& p : hg.pl().probe_points()) probes.push_back(p);
      for (const auto& x : probes) {
        if (gh(x) != hg(x)) {
          out.point = x;
          out.numeric_point = x.get_d();
          break;
        }
      }
      return out;
    }
    PLFixedSet fg = g.pl().fixed_points();
    PLFixedSet fh = h.pl().fixed_points();
    if (fg.count_class() == 0 && fh.count_class() == 0) {
      out.kind = CommuteResult::Kind::FreePair;
      return out;
    }
    const PLMap& pg = g.pl();
    const PLMap& ph = h.pl();
    for (const auto& x : fg.points) {
      if (ph(x) == x) {
        out.kind = CommuteResult::Kind::CommonFixedPoint;
        out.point = x;
        out.numeric_point = x.get_d();
        return out;
      }
    }
    for (const auto& x : fh.points) {
      if (pg(x) == x) {
        out.kind = CommuteResult::Kind::CommonFixedPoint;
        out.point = x;
        out.numeric_point = x.get_d();
        return out;
      }
    }
    out.kind = CommuteResult::Kind::CommuteOther;
    return out;
  }
  for (int i = -512; i <= 512; ++i) {
    double x = i / 64.0;
    if (std::abs(gh(x) - hg(x)) > kNumericTolerance) {
      out.kind = CommuteResult::Kind::NotCommute;
      out.numeric_point = x;
      return out;
    }
  }
  FixedPointReport fg = fixed_points_default(g);
  FixedPointReport fh = fixed_points_default(h);
  if (fg.points.empty() && fh.points.empty()) {
    out.kind = CommuteResult::Kind::FreePair;
    return out;
  }
  for (double x : fg.points) {
    if (std::abs(h(x) - x) <= kNumericTolerance) {
      out.kind = CommuteResult::Kind::CommonFixedPoint;
      out.numeric_point = x;
      return out;
    }
  }
  out.kind = CommuteResult::Kind::CommuteOther;
  return out;
}

AbelianResult abelian_check(const Action& action, int word_len) {
  std::vector<Element> elements = enumerate_elements(action, word_len);
  AbelianResult out;
  for (std::size_t i = 0; i < action.generators.size(); ++i) {
    const LineMap& gen = action.generators[i].map;
    for (const Element& e : elements) {
      ++out.pairs_checked;
      LineMap c = commutator(gen, e.map);
      if (!numerically_identity(c)) {
        out.abelian = false;
        out.witness = std::make_pair(Word::generator(static_cast<int>(i)), e.word);
        out.commutator = c;
        return out;
      }
    }
  }
  return out;
}

MetabelianResult metabelian_check(const Action& action, int word_len, long power_bound) {
  if (!action.all_pl()) throw Error("metabelian check requires piecewise-affine generators");
  const int half = std::max(1, (word_len + 1) / 2);
  std::vector<Element> elements = enumerate_elements(action, half);
  MetabelianResult out;
  std::vector<Element>& comms = out.sampled_commutators;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      LineMap c = commutator(elements[i].map, elements[j].map);
      if (c.is_identity()) continue;
      if (!seen.insert(c.pl().key()).second) continue;
      comms.push_back({commutator(elements[i].word, elements[j].word), std::move(c)});
    }
  }
  out.commutators = comms.size();

  std::vector<std::optional<std::size_t>> first_bad(comms.size());
  parallel_for(comms.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < comms.size(); ++j) {
      if (!(compose(comms[i].map, comms[j].map) == compose(comms[j].map, comms[i].map))) {
        first_bad[i] = j;
        return;
      }
    }
  });
  out.pairs_checked = comms.size() * (comms.size() > 0 ? comms.size() - 1 : 0) / 2;
  for (std::size_t i = 0; i < comms.size(); ++i) {
    if (first_bad[i]) {
      out.pass = false;
      out.failure = "commutators do not commute";
      out.witness = std::make_pair(comms[i].word, comms[*first_bad[i]].word);
      return out;
    }
  }

  std::optional<Element> reference;
  for (const Element& e : elements) {
    if (e.map.pl().fixed_points().count_class() == 1) {
      reference = positive_version(e);
      break;
    }
  }
  out.infinitesimal_checked = true;
  if (!reference) return out;  // free action: I = G
  for (const Element& c : comms) {
    if (!is_infinitesimal(c.map, reference->map, power_bound).yes) {
      out.pass = false;
      out.failure = "commutator outside the infinitesimal subgroup";
      out.witness = std::make_pair(c.word, reference->word);
      return out;
    }
  }
  return out;
}

}  // namespace lineact
