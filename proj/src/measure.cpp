#include "lineact/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace lineact {

namespace {

std::pair<Rational, Rational> bounds(const Interval& i) {
  if (!i.bounded()) throw Error("bounded interval required");
  return {*i.lo, *i.hi};
}

double frac(double x) { return x - std::floor(x); }

double ecdf(const std::vector<double>& sorted, double t) {
  if (sorted.empty()) return t;
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

Rational interpolate(const std::vector<std::pair<Rational, Rational>>& knots, const Rational& x) {
  auto it = std::lower_bound(knots.begin(), knots.end(), x, [](const auto& k, const Rational& v) { return k.first < v; });
  if (it != knots.end() && it->first == x) return it->second;
  if (it == knots.begin() || it == knots.end()) throw Error("interpolation outside knot range");
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

bool collinear(const std::vector<std::pair<Rational, Rational>>& knots, const Rational& slope) {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if ((knots[i].second - knots[i - 1].second) != slope * (knots[i].first - knots[i - 1].first)) return false;
  }
  return true;
}

}  // namespace

Measure Measure::empirical(const Action& action, const EmpiricalParams& params) {
  if (!action.all_pl()) throw Error("empirical measure requires piecewise-affine generators");
  LineMap h = action.realize(params.free_element);
  EmpiricalBackend b;
  b.rectifier = rectify_free_element(h).c;
  for (const Element& e : enumerate_elements(action, params.orbit_length, {.include_identity = true})) {
    b.fractions.push_back(frac(b.rectifier(e.map(params.base_point))));
  }
  std::sort(b.fractions.begin(), b.fractions.end());
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> pick(0, b.fractions.size() - 1);
  for (int r = 0; r < params.bootstrap_samples; ++r) {
    std::vector<double> sample(b.fractions.size());
    for (double& s : sample) s = b.fractions[pick(rng)];
    std::sort(sample.begin(), sample.end());
    b.bootstrap.push_back(std::move(sample));
  }
  return Measure(std::move(b));
}

double Measure::cdf(double x) const {
  const auto& e = std::get<EmpiricalBackend>(backend_);
  double y = e.rectifier(x);
  return std::floor(y) + ecdf(e.fractions, frac(y));
}

double Measure::nu(double x0, double x1) const {
  if (x0 == x1) return 0.0;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, LebesgueBackend>) {
          return x1 - x0;
        } else if constexpr (std::is_same_v<T, PullbackBackend>) {
          return b.collapse(x1) - b.collapse(x0);
        } else {
          return cdf(x1) - cdf(x0);
        }
      },
      backend_);
}

std::optional<Rational> Measure::nu_exact(const Rational& x0, const Rational& x1) const {
  if (const auto* p = as_pullback()) return p->collapse(x1) - p->collapse(x0);
  if (std::holds_alternative<LebesgueBackend>(backend_)) return Rational(x1 - x0);
  return std::nullopt;
}

MassEstimate Measure::nu_with_error(double x0, double x1) const {
  MassEstimate out{nu(x0, x1), 0.0};
  const auto* e = std::get_if<EmpiricalBackend>(&backend_);
  if (!e || e->bootstrap.empty()) return out;
  double y0 = e->rectifier(x0), y1 = e->rectifier(x1);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& s : e->bootstrap) {
    double v = (std::floor(y1) + ecdf(s, frac(y1))) - (std::floor(y0) + ecdf(s, frac(y0)));
    sum += v;
    sum2 += v * v;
  }
  double n = static_cast<double>(e->bootstrap.size());
  double mean = sum / n;
  out.error = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
  return out;
}

double Measure::tolerance() const {
  if (std::holds_alternative<LebesgueBackend>(backend_)) return 0.0;
  if (as_pullback()) return kPullbackTolerance;
  return kEmpiricalTolerance;
}

std::string Measure::kind() const {
  if (std::holds_alternative<LebesgueBackend>(backend_)) return "lebesgue";
  if (as_pullback()) return "pullback";
  return "empirical";
}

std::string Measure::normalization() const {
  if (std::holds_alternative<LebesgueBackend>(backend_)) return "mu([0,1)) = 1";
  if (const auto* p = as_pullback()) return "mu([0,1)) = " + to_string(p->collapse(Rational(1)) - p->collapse(Rational(0)));
  return "mu([x, h(x))) = 1 for the rectified free element";
}

double theta(const Measure& mu, double x) { return mu.nu(0.0, x); }

std::optional<Rational> theta_exact(const Measure& mu, const Rational& x) { return mu.nu_exact(0, x); }

namespace {

// Pullback masses are exact but only intertwine up to the window width, so
// exact results are settled on the simplest rational within tolerance.
Rational settle(const Measure& mu, const Rational& q) {
  if (mu.tolerance() == 0) return q;
  Rational slack = from_double(mu.tolerance()) * std::max(Rational(1), Rational(abs(q)));
  return simplest_between(q - slack, q + slack);
}

}  // namespace

Scaling scaling_factor(const Measure& mu, const LineMap& g, const Interval& probe) {
  auto [p, q] = bounds(probe);
  const Rational w = q - p;
  std::vector<std::pair<Rational, Rational>> probes{{p, q}, {q + w, q + 2 * w}, {p - 2 * w, p - w}};
  const bool exact = mu.exact() && g.is_pl();
  Scaling out;
  std::vector<double> ratios;
  std::optional<Rational> first;
  for (auto& [lo, hi] : probes) {
    // widen probes that sit inside a null set
    for (int k = 0; k < 40 && mu.nu(lo.get_d(), hi.get_d()) <= 0; ++k) hi = lo + 2 * (hi - lo);
    double mass = mu.nu(lo.get_d(), hi.get_d());
    if (mass <= 0) throw Error("probe interval has zero mass");
    out.probes.push_back(Interval::closed(lo, hi));
    if (exact) {
      Rational r = *mu.nu_exact(g(lo), g(hi)) / *mu.nu_exact(lo, hi);
      if (!first) first = r;
      ratios.push_back(r.get_d());
    } else {
      ratios.push_back(mu.nu(g(lo.get_d()), g(hi.get_d())) / mass);
    }
  }
  out.value = ratios.front();
  if (first) out.exact = settle(mu, *first);
  for (double r : ratios) out.max_deviation = std::max(out.max_deviation, std::abs(r / out.value - 1.0));
  double tol = std::max(mu.tolerance(), exact ? 0.0 : kNumericTolerance);
  if (out.max_deviation > tol) throw Error("measure not quasi-invariant for g at tolerance");
  return out;
}

TranslationNumber translation_number(const Measure& mu, const LineMap& f, double x) {
  Scaling a = scaling_factor(mu, f);
  double tol = std::max(mu.tolerance(), a.exact ? 0.0 : kNumericTolerance);
  if (a.exact ? *a.exact != 1 : std::abs(a.value - 1.0) > tol) {
    throw Error("translation number undefined off kernel of A");
  }
  TranslationNumber out;
  out.base_points = {x, x + 1.0 / 3.0, x - 7.0 / 5.0};
  const bool exact = mu.exact() && f.is_pl();
  std::vector<double> values;
  for (double b : out.base_points) {
    if (exact) {
      Rational xb = from_double(b);
      Rational v = settle(mu, *mu.nu_exact(xb, f(xb)));
      if (!out.exact) out.exact = v;
      values.push_back(v.get_d());
    } else {
      values.push_back(mu.nu(b, f(b)));
    }
  }
  out.value = values.front();
  for (double v : values) out.spread = std::max(out.spread, std::abs(v - out.value));
  return out;
}

PhiResult phi(const Measure& mu, const LineMap& g) {
  Scaling a = scaling_factor(mu, g);
  PhiResult out;
  if (a.exact) {
    out.exact = true;
    out.map = {*a.exact, settle(mu, *mu.nu_exact(0, g(Rational(0))))};
  } else {
    out.map = {from_double(a.value), from_double(mu.nu(0.0, g(0.0)))};
  }
  return out;
}

Residual semiconjugacy_residual(const Measure& mu, const Action& action, int grid, const Interval& window) {
  if (grid < 2) throw Error("grid needs at least two points");
  auto [lo, hi] = bounds(window);
  Residual out;
  out.exact = mu.exact() && action.all_pl();
  for (const Generator& gen : action.generators) {
    PhiResult ph = phi(mu, gen.map);
    for (int i = 0; i < grid; ++i) {
      Rational x = lo + (hi - lo) * i / (grid - 1);
      double r;
      if (out.exact) {
        Rational d = *theta_exact(mu, gen.map(x)) - ph.map(*theta_exact(mu, x));
        r = std::abs(d.get_d());
      } else {
        double xd = x.get_d();
        r = std::abs(theta(mu, gen.map(xd)) - ph.map(theta(mu, xd)));
      }
      ++out.points;
      if (r > out.max || out.worst_generator.empty()) {
        if (r > out.max) out.max = r;
        out.worst_x = x.get_d();
        out.worst_generator = gen.name;
      }
    }
  }
  return out;
}

DichotomyReport kernel_fixed_point_dichotomy(const Measure& mu, const LineMap& g) {
  DichotomyReport out;
  if (g.is_identity()) {
    out.trivial = true;
    return out;
  }
  out.fixed = fixed_points(g, Interval::closed(-64, 64)).count;
  Scaling a = scaling_factor(mu, g);
  out.scaling = a.value;
  double tol = std::max(mu.tolerance(), a.exact ? 0.0 : kNumericTolerance);
  bool off_kernel = a.exact ? *a.exact != 1 : std::abs(a.value - 1.0) > tol;
  out.consistent = out.fixed != FixedCount::TwoOrMore && ((out.fixed == FixedCount::One) == off_kernel);
  return out;
}

Rectification rectify_free_element(const LineMap& h, int max_domains) {
  if (!h.is_pl()) throw Error("rectification requires a piecewise-affine map");
  const PLMap& hp = h.pl();
  if (hp.fixed_points().count_class() != 0) throw Error("rectification needs a fixed-point-free element");
  Rectification out;
  PLMap H = hp;
  if (hp(Rational(0)) < 0) {
    H = hp.inverse();
    out.direction = -1;
  }
  const PLMap Hinv = H.inverse();
  const auto& bps = H.breakpoints();
  const Rational x0 = bps.empty() ? Rational(0) : bps.back() + 1;

  using Knots = std::vector<std::pair<Rational, Rational>>;
  Knots domain{{x0, 0}, {H(x0), 1}};
  std::map<Rational, Rational> all(domain.begin(), domain.end());
  const Germ right = H.germ();
  const Germ left = H.left_germ();

  // Forward domains lie beyond every breakpoint.
  std::optional<Rational> right_slope;
  if (right.slope == 1) right_slope = 1 / right.intercept;
  Knots fwd = domain;
  for (int k = 0; !right_slope && k < max_domains; ++k) {
    Knots next;
    for (const auto& [p, v] : fwd) next.push_back({H(p), v + 1});
    fwd = next;
    for (const auto& kv : fwd) all.insert(kv);
  }

  std::optional<Rational> left_slope;
  Knots back = domain;
  for (int k = 0; k < max_domains; ++k) {
    const Rational a = back.front().first;
    const Rational a_prev = Hinv(a);
    Knots next;
    for (const auto& [p, v] : back) next.push_back({Hinv(p), v - 1});
    for (const auto& b : bps) {
      if (b > a_prev && b < a) next.push_back({b, interpolate(back, H(b)) - 1});
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    back = next;
    for (const auto& kv : back) all.insert(kv);
    if (left.slope == 1 && (bps.empty() || back.back().first <= bps.front()) && collinear(back, 1 / left.intercept)) {
      left_slope = 1 / left.intercept;
      break;
    }
  }

  Knots knots(all.begin(), all.end());
  auto edge_slope = [&](std::size_t i) -> Rational {
    return (knots[i + 1].second - knots[i].second) / (knots[i + 1].first - knots[i].first);
  };
  out.c = PLMap::from_knots(knots, left_slope.value_or(edge_slope(0)),
                            right_slope.value_or(edge_slope(knots.size() - 2)));
  out.exact_global = left_slope && right_slope;
  if (out.exact_global) {
    out.window = Interval::whole_line();
    if (!(compose(out.c, compose(hp, out.c.inverse())) == PLMap::translation(out.direction))) {
      throw Error("rectification failed verification");
    }
  } else {
    if (!left_slope) out.window.lo = out.direction > 0 ? knots.front().first : H(knots.front().first);
    if (!right_slope) out.window.hi = out.direction > 0 ? Hinv(knots.back().first) : knots.back().first;
  }
  return out;
}

}  // namespace lineact
