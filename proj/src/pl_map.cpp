#include "lineact/pl_map.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace lineact {

int PLFixedSet::count_class() const {
  if (!intervals.empty()) return 2;
  return static_cast<int>(std::min<std::size_t>(points.size(), 2));
}

PLMap::PLMap() : pieces_{AffinePiece{1, 0}} {}

PLMap::PLMap(std::vector<Rational> breakpoints, std::vector<AffinePiece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  normalize();
}

PLMap PLMap::affine(const Rational& a, const Rational& b) {
  if (a <= 0) throw Error("affine map needs a positive slope, got " + to_string(a));
  return PLMap({}, {AffinePiece{a, b}});
}

PLMap PLMap::from_slopes(std::vector<Rational> breakpoints, std::vector<Rational> slopes,
                         const std::pair<Rational, Rational>& anchor) {
  if (slopes.size() != breakpoints.size() + 1) {
    throw Error("piecewise map needs exactly one more slope than breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) throw Error("breakpoints must be strictly increasing");
  }
  for (const auto& s : slopes) {
    if (s <= 0) throw Error("slopes must be positive (orientation-preserving), got " + to_string(s));
  }
  const auto& [x0, y0] = anchor;
  std::size_t k = static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x0) - breakpoints.begin());
  std::vector<AffinePiece> pieces(slopes.size());
  pieces[k] = {slopes[k], y0 - slopes[k] * x0};
  for (std::size_t i = k; i + 1 < pieces.size(); ++i) {
    const Rational& b = breakpoints[i];
    Rational value = pieces[i](b);
    pieces[i + 1] = {slopes[i + 1], value - slopes[i + 1] * b};
  }
  for (std::size_t i = k; i > 0; --i) {
    const Rational& b = breakpoints[i - 1];
    Rational value = pieces[i](b);
    pieces[i - 1] = {slopes[i - 1], value - slopes[i - 1] * b};
  }
  return PLMap(std::move(breakpoints), std::move(pieces));
}

PLMap PLMap::from_knots(const std::vector<std::pair<Rational, Rational>>& knots, const Rational& left_slope,
                        const Rational& right_slope) {
  if (knots.empty()) throw Error("at least one knot required");
  if (left_slope <= 0 || right_slope <= 0) throw Error("outer slopes must be positive");
  std::vector<Rational> breakpoints;
  std::vector<AffinePiece> pieces;
  breakpoints.reserve(knots.size());
  pieces.reserve(knots.size() + 1);
  pieces.push_back({left_slope, knots.front().second - left_slope * knots.front().first});
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto& [x0, y0] = knots[i];
    const auto& [x1, y1] = knots[i + 1];
    if (!(x0 < x1) || !(y0 < y1)) throw Error("knots must be strictly increasing in both coordinates");
    Rational s = (y1 - y0) / (x1 - x0);
    pieces.push_back({s, y0 - s * x0});
    breakpoints.push_back(x0);
  }
  breakpoints.push_back(knots.back().first);
  pieces.push_back({right_slope, knots.back().second - right_slope * knots.back().first});
  return PLMap(std::move(breakpoints), std::move(pieces));
}

void PLMap::normalize() {
  assert(pieces_.size() == breakpoints_.size() + 1);
  std::vector<Rational> bps;
  std::vector<AffinePiece> pcs;
  bps.reserve(breakpoints_.size());
  pcs.reserve(pieces_.size());
  pcs.push_back(std::move(pieces_.front()));
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    AffinePiece& next = pieces_[i + 1];
    if (next.slope == pcs.back().slope) {
      // continuity forces equal intercepts
      assert(next.intercept == pcs.back().intercept);
      continue;
    }
    bps.push_back(std::move(breakpoints_[i]));
    pcs.push_back(std::move(next));
  }
  breakpoints_ = std::move(bps);
  pieces_ = std::move(pcs);
}

std::size_t PLMap::piece_index(const Rational& x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
}

std::size_t PLMap::piece_index(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x,
                             [](double v, const Rational& b) { return v < b.get_d(); });
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

Rational PLMap::operator()(const Rational& x) const { return pieces_[piece_index(x)](x); }

double PLMap::operator()(double x) const {
  const AffinePiece& p = pieces_[piece_index(x)];
  return p.slope.get_d() * x + p.intercept.get_d();
}

const Rational& PLMap::slope_at(const Rational& x) const { return pieces_[piece_index(x)].slope; }

double PLMap::derivative(double x) const { return pieces_[piece_index(x)].slope.get_d(); }

PLMap PLMap::inverse() const {
  std::vector<Rational> bps;
  bps.reserve(breakpoints_.size());
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) bps.push_back(pieces_[i](breakpoints_[i]));
  std::vector<AffinePiece> pcs;
  pcs.reserve(pieces_.size());
  for (const auto& p : pieces_) pcs.push_back({1 / p.slope, -p.intercept / p.slope});
  return PLMap(std::move(bps), std::move(pcs));
}

PLFixedSet PLMap::fixed_points() const {
  PLFixedSet out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const AffinePiece& p = pieces_[i];
    std::optional<Rational> lo, hi;
    if (i > 0) lo = breakpoints_[i - 1];
    if (i < breakpoints_.size()) hi = breakpoints_[i];
    if (p.slope == 1) {
      if (p.intercept == 0) {
        if (!out.intervals.empty() && out.intervals.back().hi && lo && *out.intervals.back().hi == *lo) {
          out.intervals.back().hi = hi;
        } else {
          out.intervals.push_back({lo, hi});
        }
      }
      continue;
    }
    Rational x = p.intercept / (1 - p.slope);
    if ((lo && x < *lo) || (hi && x > *hi)) continue;
    out.points.push_back(x);
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  std::erase_if(out.points, [&](const Rational& x) {
    return std::any_of(out.intervals.begin(), out.intervals.end(), [&](const FixedInterval& iv) {
      return (!iv.lo || *iv.lo <= x) && (!iv.hi || x <= *iv.hi);
    });
  });
  return out;
}

std::vector<Rational> PLMap::probe_points() const {
  if (breakpoints_.empty()) return {Rational(0)};
  std::vector<Rational> out;
  out.reserve(2 * breakpoints_.size() + 1);
  out.push_back(breakpoints_.front() - 1);
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    out.push_back(breakpoints_[i]);
    if (i + 1 < breakpoints_.size()) out.push_back((breakpoints_[i] + breakpoints_[i + 1]) / 2);
  }
  out.push_back(breakpoints_.back() + 1);
  return out;
}

std::string PLMap::key() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    os << pieces_[i].slope.get_str() << ',' << pieces_[i].intercept.get_str();
    if (i < breakpoints_.size()) os << '|' << breakpoints_[i].get_str() << '|';
  }
  return os.str();
}

PLMap compose(const PLMap& f, const PLMap& g) {
  if (f.is_identity()) return g;
  if (g.is_identity()) return f;
  const auto& gb = g.breakpoints();
  const auto& gp = g.pieces();
  std::vector<Rational> g_values;
  g_values.reserve(gb.size());
  for (std::size_t i = 0; i < gb.size(); ++i) g_values.push_back(gp[i](gb[i]));

  std::vector<Rational> cuts(gb.begin(), gb.end());
  cuts.reserve(gb.size() + f.breakpoints().size());
  for (const auto& y : f.breakpoints()) {
    // preimage of y under g
    std::size_t k = static_cast<std::size_t>(std::upper_bound(g_values.begin(), g_values.end(), y) - g_values.begin());
    cuts.push_back((y - gp[k].intercept) / gp[k].slope);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<AffinePiece> pieces;
  pieces.reserve(cuts.size() + 1);
  auto piece_at = [&](const Rational& x) {
    const AffinePiece& inner = gp[g.piece_index(x)];
    const AffinePiece& outer = f.pieces()[f.piece_index(inner(x))];
    return AffinePiece{outer.slope * inner.slope, outer.slope * inner.intercept + outer.intercept};
  };
  if (cuts.empty()) {
    pieces.push_back(piece_at(Rational(0)));
  } else {
    pieces.push_back(piece_at(cuts.front() - 1));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces.push_back(piece_at((cuts[i] + cuts[i + 1]) / 2));
    pieces.push_back(piece_at(cuts.back() + 1));
  }
  return PLMap(std::move(cuts), std::move(pieces));
}

PLMap power(const PLMap& f, long n) {
  PLMap base = n < 0 ? f.inverse() : f;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  PLMap result;
  while (e > 0) {
    if (e & 1UL) result = compose(result, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

MonotonePL::MonotonePL(std::vector<std::pair<Rational, Rational>> knots, Rational left_slope, Rational right_slope)
    : knots_(std::move(knots)), left_slope_(std::move(left_slope)), right_slope_(std::move(right_slope)) {
  if (knots_.empty()) throw Error("monotone map needs at least one knot");
  if (left_slope_ < 0 || right_slope_ < 0) throw Error("monotone map slopes must be non-negative");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].first < knots_[i].first)) throw Error("monotone map knots must have increasing x");
    if (knots_[i - 1].second > knots_[i].second) throw Error("monotone map must be non-decreasing");
  }
}

Rational MonotonePL::operator()(const Rational& x) const {
  if (x <= knots_.front().first) return knots_.front().second + left_slope_ * (x - knots_.front().first);
  if (x >= knots_.back().first) return knots_.back().second + right_slope_ * (x - knots_.back().first);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](const Rational& v, const auto& k) { return v < k.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double MonotonePL::operator()(double x) const {
  const double front = knots_.front().first.get_d();
  const double back = knots_.back().first.get_d();
  if (x <= front) return knots_.front().second.get_d() + left_slope_.get_d() * (x - front);
  if (x >= back) return knots_.back().second.get_d() + right_slope_.get_d() * (x - back);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const auto& k) { return v < k.first.get_d(); });
  const double x1 = it->first.get_d(), y1 = it->second.get_d();
  const double x0 = (it - 1)->first.get_d(), y0 = (it - 1)->second.get_d();
  if (y1 == y0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

std::vector<std::pair<Rational, Rational>> MonotonePL::flat_intervals() const {
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (knots_[i].second != knots_[i + 1].second) continue;
    if (!out.empty() && out.back().second == knots_[i].first) {
      out.back().second = knots_[i + 1].first;
    } else {
      out.emplace_back(knots_[i].first, knots_[i + 1].first);
    }
  }
  return out;
}

}  // namespace lineact
