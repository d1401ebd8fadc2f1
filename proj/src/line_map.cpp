#include "lineact/line_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lineact {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double apply(const Atom& a, double x) {
  return std::visit([x](const auto& f) { return f(x); }, a);
}

double atom_derivative(const Atom& a, double x) {
  return std::visit([x](const auto& f) { return f.derivative(x); }, a);
}

Atom atom_inverse(const Atom& a) {
  return std::visit([](const auto& f) -> Atom { return f.inverse(); }, a);
}

bool cancels(const Atom& a, const Atom& b) {
  const auto* sa = std::get_if<SineMap>(&a);
  const auto* sb = std::get_if<SineMap>(&b);
  return sa && sb && sa->c == sb->c && sa->eps == sb->eps && sa->inverted != sb->inverted;
}

// Appends an atom to a factor list (outermost first), merging PL neighbours
// and cancelling a sine map against its inverse.
void push_atom(std::vector<Atom>& out, Atom a) {
  if (const auto* p = std::get_if<PLMap>(&a); p && p->is_identity()) return;
  if (const auto* s = std::get_if<SineMap>(&a); s && s->c == 0.0 && s->eps == 0.0) return;
  if (!out.empty()) {
    if (auto* last = std::get_if<PLMap>(&out.back())) {
      if (const auto* p = std::get_if<PLMap>(&a)) {
        PLMap merged = compose(*last, *p);
        out.pop_back();
        if (!merged.is_identity()) out.emplace_back(std::move(merged));
        return;
      }
    }
    if (cancels(out.back(), a)) {
      out.pop_back();
      return;
    }
  }
  out.push_back(std::move(a));
}

std::string describe_atom(const Atom& a) {
  return std::visit(overloaded{
                        [](const PLMap& f) {
                          if (f.is_affine()) {
                            return "affine(" + to_string(f.pieces()[0].slope) + "," + to_string(f.pieces()[0].intercept) + ")";
                          }
                          return "pl[" + f.key() + "]";
                        },
                        [](const SineMap& f) {
                          std::ostringstream os;
                          os << (f.inverted ? "inv_sine(" : "sine(") << f.c << ',' << f.eps << ')';
                          return os.str();
                        },
                    },
                    a);
}

}  // namespace

SineMap SineMap::make(double c, double eps) {
  if (!std::isfinite(c) || !std::isfinite(eps)) throw Error("sine-perturbed translation needs finite parameters");
  if (!(std::abs(kTwoPi * eps) < 1.0)) {
    throw Error("sine-perturbed translation needs |2*pi*eps| < 1 to be a diffeomorphism");
  }
  return {c, eps, false};
}

double SineMap::forward(double x) const { return x + c + eps * std::sin(kTwoPi * x); }

double SineMap::forward_derivative(double x) const { return 1.0 + kTwoPi * eps * std::cos(kTwoPi * x); }

double SineMap::forward_second_derivative(double x) const { return -kTwoPi * kTwoPi * eps * std::sin(kTwoPi * x); }

double SineMap::backward(double y) const {
  double lo = y - c - std::abs(eps) - kInverseTolerance;
  double hi = y - c + std::abs(eps) + kInverseTolerance;
  for (int i = 0; i < 200 && hi - lo > 0.25 * kInverseTolerance; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (forward(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double SineMap::derivative(double x) const {
  return inverted ? 1.0 / forward_derivative(backward(x)) : forward_derivative(x);
}

LineMap::LineMap(Composite f) {
  std::vector<Atom> flat;
  for (auto& a : f.factors) push_atom(flat, std::move(a));
  if (flat.empty()) {
    rep_ = PLMap{};
  } else if (flat.size() == 1) {
    std::visit([this](auto&& a) { rep_ = std::move(a); }, std::move(flat.front()));
  } else {
    rep_ = Composite{std::move(flat)};
  }
}

const PLMap& LineMap::pl() const {
  if (const auto* p = as_pl()) return *p;
  throw Error("exact evaluation requires a piecewise-affine map, got " + describe());
}

std::vector<Atom> LineMap::atoms() const {
  return std::visit(overloaded{
                        [](const PLMap& f) { return std::vector<Atom>{f}; },
                        [](const SineMap& f) { return std::vector<Atom>{f}; },
                        [](const Composite& f) { return f.factors; },
                    },
                    rep_);
}

Rational LineMap::operator()(const Rational& x) const { return pl()(x); }

double LineMap::operator()(double x) const {
  return std::visit(overloaded{
                        [x](const PLMap& f) { return f(x); },
                        [x](const SineMap& f) { return f(x); },
                        [x](const Composite& f) {
                          double y = x;
                          for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it) y = apply(*it, y);
                          return y;
                        },
                    },
                    rep_);
}

double LineMap::derivative(double x) const {
  return std::visit(overloaded{
                        [x](const PLMap& f) { return f.derivative(x); },
                        [x](const SineMap& f) { return f.derivative(x); },
                        [x](const Composite& f) {
                          double y = x;
                          double d = 1.0;
                          for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it) {
                            d *= atom_derivative(*it, y);
                            y = apply(*it, y);
                          }
                          return d;
                        },
                    },
                    rep_);
}

bool LineMap::is_identity() const {
  if (const auto* p = as_pl()) return p->is_identity();
  return false;
}

std::string LineMap::describe() const {
  std::string out;
  for (const auto& a : atoms()) {
    if (!out.empty()) out += " o ";
    out += describe_atom(a);
  }
  return out;
}

bool operator==(const LineMap& a, const LineMap& b) {
  if (a.is_pl() && b.is_pl()) return a.pl() == b.pl();
  return a.atoms() == b.atoms();
}

LineMap compose(const LineMap& f, const LineMap& g) {
  if (f.is_pl() && g.is_pl()) return compose(f.pl(), g.pl());
  std::vector<Atom> factors = f.atoms();
  for (auto& a : g.atoms()) factors.push_back(std::move(a));
  return LineMap(Composite{std::move(factors)});
}

LineMap invert(const LineMap& f) {
  if (const auto* p = f.as_pl()) return p->inverse();
  if (const auto* s = f.as_sine()) return s->inverse();
  std::vector<Atom> factors;
  auto atoms = f.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) factors.push_back(atom_inverse(*it));
  return LineMap(Composite{std::move(factors)});
}

LineMap power(const LineMap& f, long n) {
  if (const auto* p = f.as_pl()) return power(*p, n);
  LineMap base = n < 0 ? invert(f) : f;
  LineMap out;
  for (long i = 0; i < std::abs(n); ++i) out = compose(out, base);
  return out;
}

LineMap conjugate(const LineMap& f, const LineMap& c) { return compose(invert(c), compose(f, c)); }

LineMap commutator(const LineMap& g, const LineMap& h) {
  return compose(compose(g, h), compose(invert(g), invert(h)));
}

Interval Interval::closed(Rational lo, Rational hi) {
  if (!(lo < hi)) throw Error("interval needs lo < hi, got [" + to_string(lo) + ", " + to_string(hi) + "]");
  return {std::move(lo), std::move(hi), true, true};
}

Rational Interval::length() const {
  if (!bounded()) throw Error("unbounded interval has no finite length");
  return *hi - *lo;
}

bool Interval::contains(const Rational& x) const {
  if (lo && (lo_closed ? x < *lo : x <= *lo)) return false;
  if (hi && (hi_closed ? x > *hi : x >= *hi)) return false;
  return true;
}

std::string Interval::describe() const {
  std::string out = lo_closed && lo ? "[" : "(";
  out += lo ? to_string(*lo) : "-inf";
  out += ", ";
  out += hi ? to_string(*hi) : "+inf";
  out += hi_closed && hi ? "]" : ")";
  return out;
}

std::string to_string(FixedCount c) {
  switch (c) {
    case FixedCount::Zero:
      return "0";
    case FixedCount::One:
      return "1";
    case FixedCount::TwoOrMore:
      return ">=2";
  }
  return "?";
}

FixedPointReport fixed_points(const LineMap& f, const Interval& search, int grid_per_unit) {
  FixedPointReport out;
  if (const auto* p = f.as_pl()) {
    PLFixedSet fs = p->fixed_points();
    out.exact = true;
    out.exact_points = fs.points;
    for (const auto& x : fs.points) out.points.push_back(x.get_d());
    out.intervals = fs.intervals;
    int c = fs.count_class();
    out.count = c == 0 ? FixedCount::Zero : (c == 1 ? FixedCount::One : FixedCount::TwoOrMore);
    return out;
  }
  if (!search.bounded()) throw Error("finite search interval required");
  if (grid_per_unit <= 0) throw Error("grid density must be positive");
  const double lo = search.lo->get_d();
  const double hi = search.hi->get_d();
  const long n = std::max<long>(2, static_cast<long>(std::ceil((hi - lo) * grid_per_unit)));
  auto d = [&f](double x) { return f(x) - x; };
  double prev_x = lo;
  double prev = d(lo);
  int zero_run = std::abs(prev) <= kRootTolerance ? 1 : 0;
  bool flat = false;
  if (prev == 0.0) out.points.push_back(lo);
  for (long i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    double v = d(x);
    zero_run = std::abs(v) <= kRootTolerance ? zero_run + 1 : 0;
    if (zero_run >= 2) flat = true;
    if (v == 0.0) {
      out.points.push_back(x);
    } else if (prev != 0.0 && (prev < 0.0) != (v < 0.0)) {
      double a = prev_x, b = x, fa = prev;
      while (b - a > kRootTolerance) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        double fm = d(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.points.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev = v;
  }
  if (flat || out.points.size() >= 2) {
    out.count = FixedCount::TwoOrMore;
  } else {
    out.count = out.points.empty() ? FixedCount::Zero : FixedCount::One;
  }
  return out;
}

CrossingResult crossing_count(const LineMap& f, const LineMap& g, int cap, const Interval& search, int grid_per_unit) {
  CrossingResult out;
  if (f == g) {
    out.equal = true;
    return out;
  }
  FixedPointReport fp = fixed_points(compose(g, invert(f)), search, grid_per_unit);
  if (!fp.intervals.empty() || (fp.count == FixedCount::TwoOrMore && fp.points.size() < 2)) {
    out.count = cap;
  } else {
    out.count = static_cast<int>(std::min<std::size_t>(fp.points.size(), static_cast<std::size_t>(cap)));
  }
  return out;
}

}  // namespace lineact
