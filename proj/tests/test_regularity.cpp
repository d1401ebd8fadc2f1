#include <doctest.h>

#include <cmath>

#include "lineact/constructions.hpp"
#include "lineact/regularity.hpp"
#include "oracle.hpp"

using namespace lineact;

TEST_CASE("distortion of a PL map is the log slope ratio") {
  LineMap f = PLMap::from_slopes({Rational(1, 2)}, {1, 3}, {0, 0});
  CHECK(distortion(f, Interval::closed(0, 1)) == doctest::Approx(std::log(3.0)));
  CHECK(distortion(f, Interval::closed(0, Rational(1, 4))) == 0.0);
  double grid = oracle::grid_distortion([&](double x) { return f(x); }, 0.0, 1.0, 999);
  CHECK(distortion(f, Interval::closed(0, 1)) == doctest::Approx(grid).epsilon(1e-6));
}

TEST_CASE("distortion of a sine-perturbed map matches a finite-difference scan") {
  LineMap f = LineMap::sine_perturbed_translation(0.3, 0.1);
  for (auto [lo, hi] : {std::pair{0.0, 0.1}, std::pair{0.2, 0.7}, std::pair{-1.0, 1.0}}) {
    double got = distortion(f, Interval::closed(from_double(lo), from_double(hi)));
    double ref = oracle::grid_distortion([&](double x) { return f(x); }, lo, hi, 20000);
    CHECK(got == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("log-derivative Lipschitz constant bounds the sampled slope of log Df") {
  const double eps = 0.1, pi = std::acos(-1.0);
  LineMap f = LineMap::sine_perturbed_translation(0.3, eps);
  double C = log_deriv_lipschitz(f);
  CHECK(C == doctest::Approx(4 * pi * pi * eps / (1 - 2 * pi * eps)));
  double sampled = 0;
  const double h = 1e-5;
  for (double x = 0; x < 1; x += 1e-3) {
    double d0 = std::log(f.derivative(x)), d1 = std::log(f.derivative(x + h));
    sampled = std::max(sampled, std::abs(d1 - d0) / h);
  }
  CHECK(sampled <= C);
  // |(log Df)'| = 4 pi^2 eps |sin| / (1 + 2 pi eps cos) in closed form
  double closed = 0;
  for (double t = 0; t < 1; t += 1e-5) {
    closed = std::max(closed, 4 * pi * pi * eps * std::abs(std::sin(2 * pi * t)) / (1 + 2 * pi * eps * std::cos(2 * pi * t)));
  }
  CHECK(sampled == doctest::Approx(closed).epsilon(1e-3));
  CHECK(log_deriv_lipschitz(PLMap::affine(2, 5)) == 0.0);
  CHECK_THROWS_AS(log_deriv_lipschitz(PLMap::from_slopes({0}, {1, 2}, {0, 0}), Interval::closed(-1, 1)), Error);
  double Cf2 = log_deriv_lipschitz(compose(f, f));
  CHECK(Cf2 > C);
}

TEST_CASE("distortion sums for a sine-perturbed translation") {
  LineMap f = LineMap::sine_perturbed_translation(0.3, 0.1);
  Interval J = Interval::closed(0, Rational(1, 10));
  auto rows = distortion_sum_check(f, J, 20);
  REQUIRE(rows.size() == 20);
  CHECK(rows[0].dist == doctest::Approx(oracle::grid_distortion([&](double x) { return f(x); }, 0.0, 0.1, 20000))
                            .epsilon(1e-5));
  CHECK(rows[0].orbit_sum == doctest::Approx(0.1));
  for (const auto& r : rows) {
    CHECK(r.margin >= 0);
    CHECK(r.chain_ok);
    CHECK(r.bound == doctest::Approx(r.C * r.orbit_sum));
  }
}

TEST_CASE("certified geometric tails") {
  std::vector<double> terms;
  for (int i = 0; i <= 40; ++i) terms.push_back(std::pow(0.5, i));
  SeriesSum s = certified_sum(terms);
  CHECK(s.total() >= 2.0 - 1e-12);
  CHECK(s.tail >= std::pow(0.5, 41) * 2 - 1e-15);
  CHECK(s.ratio == doctest::Approx(0.5));
  std::vector<double> harmonic;
  for (int i = 1; i <= 40; ++i) harmonic.push_back(1.0 / i);
  CHECK_THROWS_AS(certified_sum(harmonic), Error);
}

TEST_CASE("extension lemma for a contraction") {
  LineMap g = PLMap::affine(Rational(1, 2), 0);
  Interval J = Interval::closed(Rational(1, 4), Rational(1, 2));
  ExtensionReport r = schwartz_extension_check(g, J);
  CHECK(r.pass);
  CHECK(r.C == 0.0);
  CHECK(r.delta_limit == doctest::Approx(0.25));
  CHECK(r.delta < r.delta_limit);
  double ratio = Rational(r.L.length() / J.length()).get_d();
  CHECK(r.max_ratio == doctest::Approx(ratio));
  CHECK(r.max_ratio <= 2.0);
  CHECK(r.sum_J.total() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.sum_L.total() == doctest::Approx(0.5 * ratio).epsilon(1e-9));
  CHECK(r.sum_L.total() <= 2.0);

  CHECK_THROWS_AS(schwartz_extension_check(PLMap::translation(1), Interval::closed(0, Rational(1, 2))), Error);
}

TEST_CASE("gaps of a blow-up wander and affine intervals do not") {
  Action base = bs12();
  Blowup b = blowup({base, Rational(1, 29), Rational(1, 10), Rational(1, 2), 7});
  const Gap& g = b.gap_at(Rational(1, 29));
  Interval J = Interval::closed(g.lo, g.hi);
  WanderingResult w = wandering_interval_search(b.action, 6, {J}, &base);
  CHECK(w.found);
  REQUIRE(w.candidates.size() == 1);
  CHECK(w.candidates[0].wandering);
  CHECK(w.candidates[0].words_checked == 1456);

  WanderingResult a = wandering_interval_search(base, 3, {Interval::closed(0, Rational(1, 4))});
  CHECK_FALSE(a.found);
  REQUIRE(a.candidates[0].blocker);
  LineMap blocker = base.realize(*a.candidates[0].blocker);
  Rational lo = blocker(Rational(0)), hi = blocker(Rational(1, 4));
  CHECK(lo < Rational(1, 4));
  CHECK(hi > 0);
}

TEST_CASE("theta fibers: Lebesgue has none, a blow-up has one per visible gap") {
  Interval window = Interval::closed(-1, 1);
  FiberScan leb = theta_fiber_scan(Measure::lebesgue(), window, 1000);
  CHECK(leb.fibers.empty());
  CHECK(leb.min_increment == doctest::Approx(2.0 / 999));
  Blowup b = blowup({bs12(), Rational(1, 29), Rational(1, 10), Rational(1, 2), 5});
  FiberScan blow = theta_fiber_scan(b.measure(), window, 1000);
  CHECK_FALSE(blow.fibers.empty());
  CHECK(blow.min_increment == 0.0);
  for (const auto& f : blow.fibers) CHECK(*theta_exact(b.measure(), *f.lo) == *theta_exact(b.measure(), *f.hi));
  ContrastReport c = conjugacy_contrast_report(Measure::lebesgue(), b.measure(), window, 1000);
  CHECK(c.contrast());
}
