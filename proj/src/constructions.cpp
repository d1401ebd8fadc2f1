#include "lineact/constructions.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace lineact {

Action bs12() { return {"bs12", {{"a", LineMap::affine(1, 1)}, {"b", LineMap::affine(2, 0)}}}; }

Action affine_action(const std::vector<std::pair<Rational, Rational>>& pairs) {
  Action out{"affine", {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first <= 0) throw Error("affine generator needs a > 0");
    out.generators.push_back({"g" + std::to_string(i), LineMap::affine(pairs[i].first, pairs[i].second)});
  }
  return out;
}

const Gap& Blowup::gap_at(const Rational& point) const {
  for (const Gap& g : gaps) {
    if (g.point == point) return g;
  }
  throw Error("no inserted gap at " + to_string(point));
}

void require_depth(const Blowup& b, int word_len) {
  if (word_len >= b.spec.depth) {
    throw Error("word length " + std::to_string(word_len) + " must stay below the truncation depth " +
                std::to_string(b.spec.depth));
  }
}

Blowup blowup(const BlowupSpec& spec) {
  for (const auto& g : spec.base.generators) {
    if (!g.map.is_pl() || !g.map.pl().is_affine()) throw Error("blow-up needs an affine base action");
  }
  if (spec.l0 <= 0 || !(spec.beta > 0 && spec.beta < 1)) throw Error("need l0 > 0 and 0 < beta < 1");
  if (spec.depth < 0) throw Error("depth must be non-negative");

  std::map<Rational, std::pair<Word, Rational>> orbit;  // point -> (word, gap length)
  for (const Element& e : enumerate_elements(spec.base, spec.depth, {.include_identity = true})) {
    Rational p = e.map(spec.base_point);
    Rational len = spec.l0 * pow(spec.beta, e.word.length());
    auto [it, fresh] = orbit.emplace(p, std::make_pair(e.word, len));
    if (!fresh) {
      Word stab = it->second.first.inverse() * e.word;
      throw StabilizerError("base point has a nontrivial stabilizer: " + spec.base.format(stab) + " fixes " +
                                to_string(spec.base_point),
                            stab);
    }
  }

  Blowup out;
  out.spec = spec;
  out.action.name = spec.base.name + "_blowup";
  std::map<Rational, Rational> lo_of;  // point -> left end of its gap
  Rational acc = 0;
  std::vector<std::pair<Rational, Rational>> collapse_knots;
  for (const auto& [p, wl] : orbit) {
    Rational lo = p + acc;
    lo_of[p] = lo;
    out.gaps.push_back({wl.first, p, lo, lo + wl.second});
    collapse_knots.push_back({lo, p});
    collapse_knots.push_back({lo + wl.second, p});
    acc += wl.second;
  }
  out.collapse = MonotonePL(collapse_knots, 1, 1);

  auto psi = [&](const Rational& x) {
    Rational s = x;
    for (const auto& [p, wl] : orbit) {
      if (!(p < x)) break;
      s += wl.second;
    }
    return s;
  };
  auto blown_len = [&](const Rational& p) -> std::optional<Rational> {
    auto it = orbit.find(p);
    if (it == orbit.end()) return std::nullopt;
    return it->second.second;
  };

  Rational eta(1);
  eta /= Rational(mpz_class(1) << 40);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 20) throw Error("gaps overlap: boundary windows cannot be separated");
    std::vector<Generator> gens;
    bool ok = true;
    for (const Generator& g : spec.base.generators) {
      const PLMap& base = g.map.pl();
      const PLMap inv = base.inverse();
      const Rational a = base.germ().slope;
      std::vector<std::pair<Rational, Rational>> knots;
      for (const auto& [p, wl] : orbit) {
        Rational gp = base(p);
        Rational lo = lo_of[p];
        if (auto l = blown_len(gp)) {
          knots.push_back({lo, lo_of[gp]});
          knots.push_back({lo + wl.second, lo_of[gp] + *l});
        } else {
          Rational t = psi(gp);
          knots.push_back({lo, t - eta});
          knots.push_back({lo + wl.second, t + eta});
        }
        Rational q = inv(p);
        if (!blown_len(q)) {
          Rational s = psi(q);
          knots.push_back({s - eta, lo_of[p] - a * eta});
          knots.push_back({s + eta, lo_of[p] + wl.second + a * eta});
        }
      }
      std::sort(knots.begin(), knots.end());
      for (std::size_t i = 1; i < knots.size() && ok; ++i) {
        ok = knots[i].first > knots[i - 1].first && knots[i].second > knots[i - 1].second;
      }
      if (!ok) break;
      gens.push_back({g.name, LineMap(PLMap::from_knots(knots, a, a))});
    }
    if (ok) {
      out.action.generators = std::move(gens);
      out.eta = eta;
      return out;
    }
    eta /= 2;
  }
}

Action random_pl_action(std::uint64_t seed, int n_generators, int n_breakpoints, const RandomConstraints& constraints,
                        int budget) {
  if (n_generators < 1 || n_breakpoints < 0) throw Error("need at least one generator and non-negative breakpoints");
  std::mt19937_64 rng(seed);
  const std::vector<Rational> slopes{Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1),
                                     Rational(3, 2), Rational(2),    Rational(3)};
  std::uniform_int_distribution<int> bp_pick(-4, 12);  // eighths in [-1/2, 3/2]
  std::uniform_int_distribution<std::size_t> slope_pick(0, slopes.size() - 1);
  std::uniform_int_distribution<int> shift_pick(-4, 4);

  auto acceptable = [&](const PLMap& f) {
    if (f.is_identity()) return false;
    PLFixedSet fs = f.fixed_points();
    if (constraints.max_fixed_points) {
      std::size_t count = fs.intervals.empty() ? fs.points.size() : SIZE_MAX;
      if (count > static_cast<std::size_t>(*constraints.max_fixed_points)) return false;
    }
    if (constraints.fixed_points_in) {
      const Interval& box = *constraints.fixed_points_in;
      for (const auto& p : fs.points) {
        if (!box.contains(p)) return false;
      }
      for (const auto& iv : fs.intervals) {
        if (!iv.lo || !iv.hi || !box.contains(*iv.lo) || !box.contains(*iv.hi)) return false;
      }
    }
    return true;
  };

  Action out{"random_" + std::to_string(seed), {}};
  for (int g = 0; g < n_generators; ++g) {
    std::optional<PLMap> chosen;
    for (int attempt = 0; attempt < budget && !chosen; ++attempt) {
      std::vector<int> eighths;
      while (static_cast<int>(eighths.size()) < n_breakpoints) {
        int k = bp_pick(rng);
        if (std::find(eighths.begin(), eighths.end(), k) == eighths.end()) eighths.push_back(k);
      }
      std::sort(eighths.begin(), eighths.end());
      std::vector<Rational> bps;
      for (int k : eighths) bps.push_back(Rational(k) / 8);
      std::vector<Rational> s;
      for (int i = 0; i <= n_breakpoints; ++i) s.push_back(slopes[slope_pick(rng)]);
      Rational y = Rational(1, 2) + Rational(shift_pick(rng)) / 16;
      PLMap f = PLMap::from_slopes(bps, s, {Rational(1, 2), y});
      if (acceptable(f)) chosen = f;
    }
    if (!chosen) throw Error("rejection budget exhausted for generator " + std::to_string(g));
    out.generators.push_back({"g" + std::to_string(g), LineMap(*chosen)});
  }
  return out;
}

}  // namespace lineact
