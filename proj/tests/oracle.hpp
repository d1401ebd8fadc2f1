#pragma once

// Independent reference computations. Nothing here calls the library's
// algorithms; only plain GMP arithmetic and brute-force sampling.

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;

/// x -> a x + b
struct Aff {
  Q a{1}, b{0};
  Aff then_after(const Aff& inner) const { return {Q(a * inner.a), Q(a * inner.b + b)}; }  // this o inner
  Aff inv() const { return {Q(1 / a), Q(-b / a)}; }
  Q operator()(const Q& x) const { return a * x + b; }
  bool operator<(const Aff& o) const { return a != o.a ? a < o.a : b < o.b; }
  bool operator==(const Aff& o) const { return a == o.a && b == o.b; }
};

/// Letters: 0 = a, 1 = a^-1, 2 = b, 3 = b^-1 for a = x + 1, b = 2x.
inline Aff bs_letter(int l) {
  switch (l) {
    case 0: return {1, 1};
    case 1: return {1, -1};
    case 2: return {2, 0};
    default: return {Q(1, 2), 0};
  }
}

/// Left-to-right word read as composition: w = l0 l1 ... realizes l0 o l1 o ...
inline Aff bs_word(const std::vector<int>& letters) {
  Aff out;
  for (int l : letters) out = out.then_after(bs_letter(l));
  return out;
}

/// Distinct BS(1,2) elements reachable with at most n letters (identity
/// included), by breadth-first search on affine pairs.
inline std::vector<std::size_t> bs_ball_sizes(int n) {
  std::set<Aff> seen{Aff{}};
  std::vector<Aff> frontier{Aff{}};
  std::vector<std::size_t> sizes{1};
  for (int k = 1; k <= n; ++k) {
    std::vector<Aff> next;
    for (const auto& f : frontier) {
      for (int l = 0; l < 4; ++l) {
        Aff g = f.then_after(bs_letter(l));
        if (seen.insert(g).second) next.push_back(g);
      }
    }
    frontier = std::move(next);
    sizes.push_back(seen.size());
  }
  return sizes;
}

/// Evaluates the PL map with given breakpoints/slopes through the anchor by
/// integrating slopes piece by piece.
inline Q pl_eval(const std::vector<Q>& bps, const std::vector<Q>& slopes, const std::pair<Q, Q>& anchor, const Q& x) {
  auto integrate = [&](const Q& from, const Q& to) {
    // integral of the slope function from `from` to `to` (from <= to)
    Q total = 0, cur = from;
    std::size_t i = 0;
    while (i < bps.size() && bps[i] <= cur) ++i;
    while (cur < to) {
      Q next = i < bps.size() && bps[i] < to ? bps[i] : to;
      total += slopes[i] * (next - cur);
      cur = next;
      ++i;
    }
    return total;
  };
  if (x >= anchor.first) return anchor.second + integrate(anchor.first, x);
  return anchor.second - integrate(x, anchor.first);
}

/// Fixed points of a PL map (given by slopes) that lie in (-far, far): d = f - id
/// is linear between consecutive sample points, so zeros are read off the
/// signs at breakpoints. Returns -1 when d vanishes on a whole piece.
inline int pl_fixed_count(const std::vector<Q>& bps, const std::vector<Q>& slopes, const std::pair<Q, Q>& anchor,
                          const Q& far) {
  std::vector<Q> xs{Q(-far)};
  for (const auto& b : bps) xs.push_back(b);
  xs.push_back(far);
  std::vector<int> sign;
  for (const auto& x : xs) {
    Q d = pl_eval(bps, slopes, anchor, x) - x;
    sign.push_back(sgn(d));
  }
  int count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && sign[i] == 0 && sign[i - 1] == 0) return -1;
    if (sign[i] == 0 && i > 0 && i + 1 < xs.size()) ++count;
    if (i > 0 && sign[i] * sign[i - 1] < 0) ++count;
  }
  return count;
}

/// Sign changes of f(x) - x on a uniform grid plus exact zeros at grid points.
inline int grid_fixed_points(const std::function<double(double)>& f, double lo, double hi, int n) {
  int count = 0;
  double prev = f(lo) - lo;
  if (prev == 0) ++count;
  for (int i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double d = f(x) - x;
    if (d == 0) {
      ++count;
    } else if (prev != 0 && (d > 0) != (prev > 0)) {
      ++count;
    }
    prev = d;
  }
  return count;
}

/// sup log(Df(x)/Df(y)) over a grid, Df by central differences.
inline double grid_distortion(const std::function<double(double)>& f, double lo, double hi, int n) {
  double h = 1e-6 * (hi - lo);
  double mn = INFINITY, mx = -INFINITY;
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double d = (f(x + h) - f(x - h)) / (2 * h);
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  return std::log(mx / mn);
}

}  // namespace oracle
