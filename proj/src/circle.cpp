#include "lineact/circle.hpp"

#include <algorithm>
#include <cmath>

namespace lineact {

namespace {

template <class T>
T wrap_eval(const std::vector<std::pair<T, T>>& knots, const T& x) {
  const T k = [&] {
    if constexpr (std::is_same_v<T, double>) {
      return std::floor(x);
    } else {
      return floor(x);
    }
  }();
  const T t = x - k;
  const auto& first = knots.front();
  const auto& last = knots.back();
  if (t < first.first) {
    T x0 = last.first - 1, y0 = last.second - 1;
    return y0 + (first.second - y0) * (t - x0) / (first.first - x0) + k;
  }
  auto it = std::upper_bound(knots.begin(), knots.end(), t, [](const T& v, const auto& kn) { return v < kn.first; });
  const auto& [x0, y0] = *(it - 1);
  T x1, y1;
  if (it == knots.end()) {
    x1 = first.first + 1;
    y1 = first.second + 1;
  } else {
    x1 = it->first;
    y1 = it->second;
  }
  return y0 + (y1 - y0) * (t - x0) / (x1 - x0) + k;
}

bool circle_trivial(const CircleLift& F) {
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < 257; ++i) {
    double x = i / 256.0;
    double d = F(x) - x;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo <= 1e-12 && std::abs(lo - std::round(lo)) <= 1e-12;
}

bool fixes_on_circle(const CircleLift& F, double p) {
  double d = F(p) - p;
  return std::abs(d - std::round(d)) <= 1e-9;
}

}  // namespace

PeriodicPL::PeriodicPL(std::vector<std::pair<Rational, Rational>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw Error("periodic map needs at least one knot");
  std::sort(knots_.begin(), knots_.end());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].first < 0 || knots_[i].first >= 1) throw Error("periodic knots must lie in [0, 1)");
    if (i > 0 && (knots_[i].first == knots_[i - 1].first || knots_[i].second <= knots_[i - 1].second)) {
      throw Error("periodic knots must be strictly increasing");
    }
  }
  if (knots_.back().second >= knots_.front().second + 1) throw Error("periodic knots exceed one period");
  for (const auto& [x, y] : knots_) dknots_.push_back({x.get_d(), y.get_d()});
}

Rational PeriodicPL::operator()(const Rational& x) const { return wrap_eval(knots_, x); }

double PeriodicPL::operator()(double x) const { return wrap_eval(dknots_, x); }

PeriodicPL PeriodicPL::inverse() const {
  std::vector<std::pair<Rational, Rational>> inv;
  for (const auto& [x, y] : knots_) {
    Rational m = floor(y);
    inv.push_back({y - m, x - m});
  }
  return PeriodicPL(std::move(inv));
}

PeriodicityResult periodicity_check(const LineMap& g, const Rational& q, const Rational& p) {
  PeriodicityResult out;
  if (const PLMap* f = g.as_pl()) {
    PLMap lhs = compose(*f, PLMap::translation(q));
    PLMap rhs = compose(PLMap::translation(p), *f);
    if (lhs == rhs) return out;
    out.ok = false;
    std::vector<Rational> probes = lhs.probe_points();
    for (const auto& x : rhs.probe_points()) probes.push_back(x);
    for (const auto& x : probes) {
      if (lhs(x) != rhs(x)) {
        out.witness = x.get_d();
        break;
      }
    }
    return out;
  }
  const double qd = q.get_d(), pd = p.get_d();
  for (int i = -1024; i <= 1024; ++i) {
    double x = i / 256.0;
    if (std::abs(g(x + qd) - g(x) - pd) > kNumericTolerance) {
      out.ok = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

CircleLift::CircleLift(LiftFactor f) {
  if (const LineMap* m = std::get_if<LineMap>(&f)) {
    PeriodicityResult r = periodicity_check(*m, 1, 1);
    if (!r.ok) {
      throw Error("lift identity violated: F(x + 1) != F(x) + 1 at x = " + std::to_string(r.witness.value_or(0.0)));
    }
  }
  factors_.push_back(std::move(f));
}

double CircleLift::operator()(double x) const {
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    x = std::visit([x](const auto& f) { return f(x); }, *it);
  }
  return x;
}

Rational CircleLift::operator()(const Rational& x) const {
  if (!exact()) throw Error("exact evaluation needs piecewise-affine factors");
  Rational y = x;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (const LineMap* m = std::get_if<LineMap>(&*it)) {
      y = (*m)(y);
    } else {
      y = std::get<PeriodicPL>(*it)(y);
    }
  }
  return y;
}

bool CircleLift::exact() const {
  for (const auto& f : factors_) {
    if (const LineMap* m = std::get_if<LineMap>(&f); m && !m->is_pl()) return false;
  }
  return true;
}

std::optional<Rational> CircleLift::translation_amount() const {
  Rational t = 0;
  for (const auto& f : factors_) {
    const LineMap* m = std::get_if<LineMap>(&f);
    if (!m || !m->is_pl() || !m->pl().is_affine() || m->pl().germ().slope != 1) return std::nullopt;
    t += m->pl().germ().intercept;
  }
  return t;
}

CircleLift compose(const CircleLift& f, const CircleLift& g) {
  CircleLift out;
  for (const auto& x : f.factors_) out.factors_.push_back(x);
  for (const auto& x : g.factors_) {
    const LineMap* m = std::get_if<LineMap>(&x);
    LineMap* prev = out.factors_.empty() ? nullptr : std::get_if<LineMap>(&out.factors_.back());
    if (m && prev && m->is_pl() && prev->is_pl()) {
      *prev = compose(*prev, *m);
    } else {
      out.factors_.push_back(x);
    }
  }
  return out;
}

CircleLift invert(const CircleLift& f) {
  CircleLift out;
  for (auto it = f.factors_.rbegin(); it != f.factors_.rend(); ++it) {
    if (const LineMap* m = std::get_if<LineMap>(&*it)) {
      out.factors_.push_back(invert(*m));
    } else {
      out.factors_.push_back(std::get<PeriodicPL>(*it).inverse());
    }
  }
  return out;
}

CircleLift power(const CircleLift& f, long n) {
  CircleLift base = n < 0 ? invert(f) : f;
  CircleLift out;
  for (long i = 0; i < std::labs(n); ++i) out = compose(out, base);
  return out;
}

CircleLift quotient_commuting_element(const LineMap& f) { return CircleLift(f); }

RotationEstimate rotation_number(const CircleLift& F, double x0, long N) {
  if (N < 1) throw Error("N must be at least 1");
  RotationEstimate out;
  out.N = N;
  out.error_bound = 1.0 / static_cast<double>(N);
  if (auto t = F.translation_amount()) {
    out.exact = *t;
    out.estimate = t->get_d();
    return out;
  }
  double x = x0;
  for (long k = 0; k < N; ++k) x = F(x);
  out.estimate = (x - x0) / static_cast<double>(N);
  return out;
}

OrbitGaps orbit_gap_stats(const CircleLift& F, double x0, long N) {
  OrbitGaps out;
  double x = x0;
  for (long k = 0; k < N; ++k) {
    out.points.push_back(x - std::floor(x));
    x = F(x);
  }
  std::vector<double> s = out.points;
  std::sort(s.begin(), s.end());
  out.largest_gap = s.front() + 1 - s.back();
  out.gap_start = s.back();
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] - s[i - 1] > out.largest_gap) {
      out.largest_gap = s[i] - s[i - 1];
      out.gap_start = s[i - 1];
    }
  }
  return out;
}

DenjoyApproximant denjoy_approximant(const DenjoyParams& params) {
  if (params.K < 1) throw Error("K must be positive");
  if (!(params.beta > 0 && params.beta < 1) || params.l0 <= 0) throw Error("need 0 < beta < 1 and l0 > 0");
  DenjoyApproximant out;
  const Rational& alpha = params.alpha;
  auto orbit = [&](long k) {
    Rational v = params.base_point + alpha * k;
    return Rational(v - floor(v));
  };
  // indices k and their points; a periodic orbit closes at k = period
  long period = 0;
  for (long k = 1; k <= 2 * params.K + 1; ++k) {
    if (orbit(k) == orbit(0)) {
      period = k;
      break;
    }
  }
  std::vector<long> ks;
  if (period) {
    out.periodic_orbit = true;
    for (long k = 0; k < period; ++k) ks.push_back(k);
  } else {
    for (long k = -params.K; k <= params.K; ++k) ks.push_back(k);
  }
  std::vector<std::pair<Rational, Rational>> pts;  // (point, gap length)
  for (long k : ks) pts.push_back({orbit(k), period ? params.l0 : params.l0 * pow(params.beta, std::labs(k))});
  Rational total = 0;
  for (const auto& [p, l] : pts) total += l;
  const Rational scale = 1 / (1 + total);
  auto psi = [&](const Rational& x) {
    Rational acc = x;
    for (const auto& [p, l] : pts) {
      if (p < x) acc += l;
    }
    return Rational(acc * scale);
  };
  auto gap = [&](std::size_t i) {
    Rational lo = psi(pts[i].first);
    return std::make_pair(lo, Rational(lo + pts[i].second * scale));
  };
  for (std::size_t i = 0; i < pts.size(); ++i) out.gaps.push_back(gap(i));

  Rational eta(1, 1);
  eta /= Rational(mpz_class(1) << 40);
  struct Feature {
    std::pair<Rational, Rational> src, tgt;
  };
  std::vector<Feature> features;
  if (period) {
    for (std::size_t i = 0; i < pts.size(); ++i) features.push_back({gap(i), gap((i + 1) % pts.size())});
  } else {
    const Rational q_out = psi(orbit(params.K + 1));
    const Rational q_in = psi(orbit(-params.K - 1));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) features.push_back({gap(i), gap(i + 1)});
    features.push_back({gap(pts.size() - 1), {q_out - eta, q_out + eta}});
    features.push_back({{q_in - eta, q_in + eta}, gap(0)});
  }
  std::vector<std::pair<Rational, Rational>> knots;
  for (const Feature& f : features) {
    for (int e = 0; e < 2; ++e) {
      Rational s = e ? f.src.second : f.src.first;
      Rational t = e ? f.tgt.second : f.tgt.first;
      // lift t next to s + alpha, then reduce s into [0, 1)
      Rational shift = floor(s + alpha - t + Rational(1, 2));
      t += shift;
      Rational m = floor(s);
      knots.push_back({s - m, t - m});
    }
  }
  try {
    out.lift = CircleLift(PeriodicPL(std::move(knots)));
  } catch (const Error&) {
    if (period) throw;
    throw Error("orbit points of alpha nearly coincide (alpha within 2^-40 of a rational with small denominator); "
                "pass it exactly as p/q");
  }
  return out;
}

std::string to_string(CircleVerdict::Kind k) {
  switch (k) {
    case CircleVerdict::Kind::FreeAbelian:
      return "FreeAbelian";
    case CircleVerdict::Kind::GlobalFixedPoint:
      return "GlobalFixedPoint";
    case CircleVerdict::Kind::HypothesisViolated:
      return "HypothesisViolated";
    case CircleVerdict::Kind::Falsified:
      return "Falsified";
  }
  return "?";
}

std::vector<double> circle_fixed_points(const CircleLift& F, int grid) {
  std::vector<double> xs, ds;
  for (int i = 0; i <= grid; ++i) {
    double x = static_cast<double>(i) / grid;
    xs.push_back(x);
    ds.push_back(F(x) - x);
  }
  auto [mn, mx] = std::minmax_element(ds.begin(), ds.end());
  std::vector<double> out;
  for (double m = std::floor(*mn); m <= std::ceil(*mx); m += 1) {
    for (int i = 0; i < grid; ++i) {
      double a = ds[static_cast<std::size_t>(i)] - m, b = ds[static_cast<std::size_t>(i) + 1] - m;
      if (std::abs(a) <= 1e-12) {
        out.push_back(xs[static_cast<std::size_t>(i)]);
      } else if (std::abs(b) > 1e-12 && (a < 0) != (b < 0)) {
        double lo = xs[static_cast<std::size_t>(i)], hi = xs[static_cast<std::size_t>(i) + 1];
        while (hi - lo > 1e-13) {
          double mid = (lo + hi) / 2;
          if (((F(mid) - mid - m) < 0) == (a < 0)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        out.push_back((lo + hi) / 2);
      }
      if (out.size() >= 2) return out;
    }
  }
  return out;
}

CircleVerdict circle_dichotomy_check(const CircleAction& action, int word_len) {
  CircleVerdict out;
  out.detail = "torsion-free assumed, not verified";
  if (action.compactified) {
    const Action& line = *action.compactified;
    for (const Element& e : enumerate_elements(line, word_len)) {
      ++out.words_checked;
      if (e.map.is_identity()) continue;
      if (fixed_points(e.map, Interval::closed(-64, 64)).count == FixedCount::TwoOrMore) {
        out.kind = CircleVerdict::Kind::HypothesisViolated;
        out.word = line.format(e.word);
        return out;
      }
    }
    out.kind = CircleVerdict::Kind::GlobalFixedPoint;
    out.point_label = "inf";
    out.detail += "; the compactification point is fixed by every generator, fixed points on the line counted apart";
    return out;
  }

  std::vector<std::string> names;
  std::vector<CircleLift> letter_maps;
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < action.lifts.size(); ++i) {
    names.push_back(action.lifts[i].first);
    letter_maps.push_back(action.lifts[i].second);
    letters.push_back({static_cast<int>(i), 1});
    letter_maps.push_back(invert(action.lifts[i].second));
    letters.push_back({static_cast<int>(i), -1});
  }
  struct Node {
    Word word;
    CircleLift lift;
  };
  std::vector<Node> all;
  std::vector<Node> frontier{{Word{}, CircleLift{}}};
  for (int len = 1; len <= word_len; ++len) {
    std::vector<Node> next;
    for (const Node& n : frontier) {
      for (std::size_t k = 0; k < letters.size(); ++k) {
        const auto& ls = n.word.letters();
        if (!ls.empty() && ls.front().generator == letters[k].generator &&
            (ls.front().exponent > 0) != (letters[k].exponent > 0)) {
          continue;
        }
        next.push_back({Word({letters[k]}) * n.word, compose(letter_maps[k], n.lift)});
      }
    }
    for (const Node& n : next) all.push_back(n);
    frontier = std::move(next);
  }

  std::optional<double> candidate;
  for (const Node& n : all) {
    ++out.words_checked;
    if (circle_trivial(n.lift)) continue;
    std::vector<double> fp = circle_fixed_points(n.lift);
    if (fp.size() >= 2) {
      out.kind = CircleVerdict::Kind::HypothesisViolated;
      out.word = n.word.to_string(names);
      return out;
    }
    if (fp.size() == 1 && !candidate) candidate = fp.front();
  }
  if (candidate) {
    for (const Node& n : all) {
      if (!fixes_on_circle(n.lift, *candidate)) {
        out.kind = CircleVerdict::Kind::Falsified;
        out.point = candidate;
        out.word = n.word.to_string(names);
        out.detail = "element with a fixed point exists but the point is not global";
        return out;
      }
    }
    out.kind = CircleVerdict::Kind::GlobalFixedPoint;
    out.point = candidate;
    return out;
  }
  for (std::size_t i = 0; i < action.lifts.size(); ++i) {
    for (std::size_t j = i + 1; j < action.lifts.size(); ++j) {
      const CircleLift& f = action.lifts[i].second;
      const CircleLift& g = action.lifts[j].second;
      CircleLift c = compose(compose(f, g), compose(invert(f), invert(g)));
      if (!circle_trivial(c)) {
        out.kind = CircleVerdict::Kind::Falsified;
        out.word = names[i] + " " + names[j] + " " + names[i] + "^-1 " + names[j] + "^-1";
        out.detail = "free action with non-commuting generators";
        return out;
      }
    }
  }
  out.kind = CircleVerdict::Kind::FreeAbelian;
  return out;
}

}  // namespace lineact
