#include "lineact/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lineact/parallel.hpp"

namespace lineact {

namespace {

std::pair<double, double> ends(const Interval& J) {
  if (!J.bounded()) throw Error("bounded interval required");
  return {J.lo->get_d(), J.hi->get_d()};
}

std::vector<double> grid_points(double lo, double hi, int grid) {
  std::vector<double> out;
  const int n = std::max(grid, 2);
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

// Points of [lo, hi] where D(sine map) is extremal.
std::vector<double> sine_critical_points(const SineMap& s, double lo, double hi) {
  std::vector<double> out;
  if (!s.inverted) {
    for (double k = std::ceil(2 * lo); k / 2 <= hi; k += 1) out.push_back(k / 2);
  } else {
    // extremes sit at images of half-integers
    double klo = std::floor(2 * s.backward(lo)) - 1, khi = std::ceil(2 * s.backward(hi)) + 1;
    for (double k = klo; k <= khi; k += 1) {
      double y = s.forward(k / 2);
      if (y >= lo && y <= hi) out.push_back(y);
    }
  }
  return out;
}

std::vector<double> sample_points(const LineMap& f, double lo, double hi, int grid) {
  std::vector<double> pts = grid_points(lo, hi, grid);
  if (const SineMap* s = f.as_sine()) {
    for (double c : sine_critical_points(*s, lo, hi)) pts.push_back(c);
  }
  return pts;
}

struct LipschitzData {
  double C = 0.0;  // Lipschitz constant of log Df
  double S = 1.0;  // sup Df
};

LipschitzData atom_lipschitz(const Atom& a, const Interval& domain) {
  if (const SineMap* s = std::get_if<SineMap>(&a)) {
    const double k = 2 * std::numbers::pi * std::abs(s->eps);
    const double base = 4 * std::numbers::pi * std::numbers::pi * std::abs(s->eps) / (1 - k);
    if (!s->inverted) return {base, 1 + k};
    return {base / (1 - k), 1 / (1 - k)};
  }
  const PLMap& p = std::get<PLMap>(a);
  Rational top = 0;
  for (std::size_t i = 0; i < p.pieces().size(); ++i) {
    const auto& bps = p.breakpoints();
    bool starts_inside = i == 0 || !domain.hi || bps[i - 1] < *domain.hi;
    bool ends_inside = i + 1 == p.pieces().size() || !domain.lo || bps[i] > *domain.lo;
    if (starts_inside && ends_inside) top = std::max(top, p.pieces()[i].slope);
  }
  for (const auto& b : p.breakpoints()) {
    if ((!domain.lo || b > *domain.lo) && (!domain.hi || b < *domain.hi)) {
      throw Error("log-derivative is not Lipschitz across the breakpoint " + to_string(b));
    }
  }
  return {0.0, top.get_d()};
}

bool sampled_identity(const LineMap& f) {
  for (int i = -512; i <= 512; ++i) {
    double x = i / 64.0;
    if (std::abs(f(x) - x) > kNumericTolerance) return false;
  }
  return true;
}

}  // namespace

double distortion(const LineMap& f, const Interval& J, int grid) {
  auto [lo, hi] = ends(J);
  if (const PLMap* p = f.as_pl()) {
    std::optional<Rational> smin, smax;
    const auto& bps = p->breakpoints();
    for (std::size_t i = 0; i < p->pieces().size(); ++i) {
      bool after_lo = i + 1 == p->pieces().size() || bps[i] > *J.lo;
      bool before_hi = i == 0 || bps[i - 1] < *J.hi;
      if (!after_lo || !before_hi) continue;
      const Rational& s = p->pieces()[i].slope;
      if (!smin || s < *smin) smin = s;
      if (!smax || s > *smax) smax = s;
    }
    return std::log(Rational(*smax / *smin).get_d());
  }
  double mn = INFINITY, mx = -INFINITY;
  for (double x : sample_points(f, lo, hi, grid)) {
    double l = std::log(f.derivative(x));
    mn = std::min(mn, l);
    mx = std::max(mx, l);
  }
  return mx - mn;
}

double log_deriv_lipschitz(const LineMap& f, const Interval& domain) {
  std::vector<Atom> atoms = f.atoms();
  // h = atoms[0] o ... o atoms[k]; fold from the innermost factor
  LipschitzData acc;
  Interval dom = domain;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    LipschitzData a = atom_lipschitz(*it, it == atoms.rbegin() ? dom : Interval::whole_line());
    acc = {a.C * acc.S + acc.C, a.S * acc.S};
  }
  return acc.C;
}

std::vector<DistortionReport> distortion_sum_check(const LineMap& f, const Interval& J, long n_max, int grid) {
  auto [lo, hi] = ends(J);
  std::vector<double> xs = sample_points(f, lo, hi, grid);
  std::vector<double> acc(xs.size(), 0.0);
  double a = lo, b = hi;
  double C = f.is_pl() ? 0.0 : log_deriv_lipschitz(f);
  double orbit_sum = 0.0, chain_sum = 0.0;
  std::vector<DistortionReport> out;
  for (long n = 1; n <= n_max; ++n) {
    Interval Ji = Interval::closed(from_double(a), from_double(b));
    if (f.is_pl()) {
      try {
        log_deriv_lipschitz(f, Ji);
      } catch (const Error&) {
        throw Error("orbit leaves the domain where C was certified (iterate " + std::to_string(n - 1) + ")");
      }
    }
    orbit_sum += b - a;
    chain_sum += distortion(f, Ji, grid);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      acc[k] += std::log(f.derivative(xs[k]));
      xs[k] = f(xs[k]);
    }
    a = f(a);
    b = f(b);
    auto [mn, mx] = std::minmax_element(acc.begin(), acc.end());
    DistortionReport r;
    r.n = n;
    r.dist = *mx - *mn;
    r.orbit_sum = orbit_sum;
    r.C = C;
    r.bound = C * orbit_sum;
    r.margin = r.bound - r.dist;
    r.chain_sum = chain_sum;
    r.chain_ok = r.dist <= chain_sum + kNumericTolerance;
    out.push_back(r);
  }
  return out;
}

SeriesSum certified_sum(const std::vector<double>& terms) {
  if (terms.size() < 11) throw Error("series tail not certified: fewer than 11 terms");
  SeriesSum out;
  for (double t : terms) out.partial += t;
  const double last = terms.back();
  if (last == 0.0) return out;
  for (std::size_t j = terms.size() - 11; j + 1 < terms.size(); ++j) {
    if (terms[j] <= 0.0) throw Error("series tail not certified: non-positive term");
    out.ratio = std::max(out.ratio, terms[j + 1] / terms[j]);
  }
  if (out.ratio > 0.9) throw Error("series tail not certified: ratio above 0.9");
  out.tail = last * out.ratio / (1 - out.ratio);
  return out;
}

ExtensionReport schwartz_extension_check(const LineMap& g, const Interval& J, std::optional<double> delta_override,
                                         long N) {
  if (!J.bounded()) throw Error("bounded interval required");
  ExtensionReport out;
  out.N = N;
  auto orbit_lengths = [&](const Rational& lo, const Rational& hi, double* hull_lo, double* hull_hi) {
    std::vector<double> lens;
    if (g.is_pl()) {
      Rational a = lo, b = hi;
      for (long n = 0; n <= N; ++n) {
        lens.push_back(Rational(b - a).get_d());
        if (hull_lo) *hull_lo = std::min(*hull_lo, a.get_d()), *hull_hi = std::max(*hull_hi, b.get_d());
        a = g(a);
        b = g(b);
      }
    } else {
      double a = lo.get_d(), b = hi.get_d();
      for (long n = 0; n <= N; ++n) {
        lens.push_back(b - a);
        if (hull_lo) *hull_lo = std::min(*hull_lo, a), *hull_hi = std::max(*hull_hi, b);
        a = g(a);
        b = g(b);
      }
    }
    return lens;
  };
  double hlo = INFINITY, hhi = -INFINITY;
  std::vector<double> lj = orbit_lengths(*J.lo, *J.hi, &hlo, &hhi);
  out.C = g.is_pl() ? log_deriv_lipschitz(g, Interval::closed(from_double(hlo), from_double(hhi)))
                    : log_deriv_lipschitz(g);
  out.sum_J = certified_sum(lj);
  if (out.sum_J.total() > 1.0) throw Error("lemma hypothesis not satisfied");
  const Rational len = J.length();
  out.delta_limit = std::min(len.get_d(), std::exp(-2 * out.C));
  out.delta = delta_override.value_or(out.delta_limit / 2);
  if (!(out.delta > 0 && out.delta < out.delta_limit)) throw Error("delta outside (0, min{|J|, exp(-2C)})");
  const Rational pad = from_double(out.delta) * len / 4;
  out.L = Interval::closed(*J.lo - pad, *J.hi + pad);
  std::vector<double> ll = orbit_lengths(*out.L.lo, *out.L.hi, nullptr, nullptr);
  for (long n = 0; n <= N; ++n) {
    double r = ll[static_cast<std::size_t>(n)] / lj[static_cast<std::size_t>(n)];
    if (r > out.max_ratio) {
      out.max_ratio = r;
      out.worst_n = n;
    }
  }
  out.sum_L = certified_sum(ll);
  out.pass = out.max_ratio <= 2.0 && out.sum_L.total() <= 2.0;
  return out;
}

WanderingResult wandering_interval_search(const Action& action, int word_len, const std::vector<Interval>& candidates,
                                          const Action* group) {
  const bool exact = action.all_pl();
  std::vector<LineMap> letter_maps;
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < action.generators.size(); ++i) {
    letter_maps.push_back(action.generators[i].map);
    letters.push_back({static_cast<int>(i), 1});
    letter_maps.push_back(invert(action.generators[i].map));
    letters.push_back({static_cast<int>(i), -1});
  }
  WanderingResult out;
  out.word_len = word_len;
  out.candidates.resize(candidates.size());

  parallel_for(candidates.size(), [&](std::size_t c) {
    WanderingCandidate& cand = out.candidates[c];
    cand.J = candidates[c];
    if (!cand.J.bounded()) throw Error("wandering candidates must be bounded");
    const Rational x0 = *cand.J.lo, x1 = *cand.J.hi;
    struct Node {
      Word word;
      Rational y0, y1;  // exact path
      double d0 = 0, d1 = 0;
    };
    std::vector<Node> frontier{{Word{}, x0, x1, x0.get_d(), x1.get_d()}};
    for (int len = 1; len <= word_len; ++len) {
      std::vector<Node> next;
      for (const Node& node : frontier) {
        for (std::size_t k = 0; k < letters.size(); ++k) {
          const Letter& l = letters[k];
          const auto& ls = node.word.letters();
          if (!ls.empty() && ls.front().generator == l.generator && (ls.front().exponent > 0) != (l.exponent > 0)) {
            continue;
          }
          // prepend: the new word realizes l o w
          Node child{Word({l}) * node.word, 0, 0, 0, 0};
          bool meets;
          if (exact) {
            const PLMap& p = letter_maps[k].pl();
            child.y0 = p(node.y0);
            child.y1 = p(node.y1);
            meets = !(child.y1 < x0 || child.y0 > x1);
          } else {
            child.d0 = letter_maps[k](node.d0);
            child.d1 = letter_maps[k](node.d1);
            meets = !(child.d1 < x0.get_d() || child.d0 > x1.get_d());
          }
          ++cand.words_checked;
          if (meets) {
            const Action& judge = group ? *group : action;
            LineMap w = judge.realize(child.word);
            if (w.is_pl() ? w.is_identity() : sampled_identity(w)) {
              ++cand.trivial_words;
            } else {
              cand.blocker = child.word;
              return;
            }
          }
          next.push_back(std::move(child));
        }
      }
      frontier = std::move(next);
    }
    cand.wandering = true;
  });
  for (const auto& cand : out.candidates) {
    if (cand.wandering) {
      out.found = true;
      out.J = cand.J;
      break;
    }
  }
  return out;
}

FiberScan theta_fiber_scan(const Measure& mu, const Interval& window, int grid) {
  if (!window.bounded()) throw Error("bounded window required");
  if (grid < 2) throw Error("grid needs at least two points");
  FiberScan out;
  out.exact = mu.exact();
  out.points = static_cast<std::size_t>(grid);
  const Rational lo = *window.lo, hi = *window.hi;
  auto x_at = [&](int i) { return Rational(lo + (hi - lo) * i / (grid - 1)); };
  std::vector<double> inc(static_cast<std::size_t>(grid - 1));
  std::vector<char> flat(inc.size(), 0);
  if (out.exact) {
    Rational prev = *theta_exact(mu, x_at(0));
    for (int i = 1; i < grid; ++i) {
      Rational t = *theta_exact(mu, x_at(i));
      inc[static_cast<std::size_t>(i - 1)] = Rational(t - prev).get_d();
      flat[static_cast<std::size_t>(i - 1)] = t == prev;
      prev = t;
    }
  } else {
    double prev = theta(mu, x_at(0).get_d());
    for (int i = 1; i < grid; ++i) {
      double t = theta(mu, x_at(i).get_d());
      inc[static_cast<std::size_t>(i - 1)] = t - prev;
      flat[static_cast<std::size_t>(i - 1)] = std::abs(t - prev) <= mu.tolerance();
      prev = t;
    }
  }
  out.min_increment = *std::min_element(inc.begin(), inc.end());
  for (std::size_t i = 0; i < flat.size();) {
    if (!flat[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < flat.size() && flat[j]) ++j;
    out.fibers.push_back(Interval::closed(x_at(static_cast<int>(i)), x_at(static_cast<int>(j))));
    i = j;
  }
  return out;
}

ContrastReport conjugacy_contrast_report(const Measure& smooth_mu, const Measure& blowup_mu, const Interval& window,
                                         int grid) {
  ContrastReport out;
  out.smooth = theta_fiber_scan(smooth_mu, window, grid);
  out.smooth_refined = theta_fiber_scan(smooth_mu, window, 2 * grid);
  out.blowup = theta_fiber_scan(blowup_mu, window, grid);
  out.smooth_injective = out.smooth.fibers.empty() && out.smooth_refined.fibers.empty();
  out.blowup_has_fiber = !out.blowup.fibers.empty();
  return out;
}

}  // namespace lineact
