#include <doctest.h>

#include <random>

#include "lineact/constructions.hpp"
#include "oracle.hpp"

using namespace lineact;

namespace {

struct RandomPL {
  std::vector<Rational> bps, slopes;
  std::pair<Rational, Rational> anchor;
  PLMap map;
};

RandomPL random_pl(std::mt19937& rng, int n_bps) {
  static const Rational slope_pool[] = {Rational(1, 3), Rational(1, 2), Rational(2, 3), 1, Rational(3, 2), 2, 3};
  std::uniform_int_distribution<int> pos(-16, 16), pick(0, 6), off(-8, 8);
  std::set<int> bp_set;
  while (static_cast<int>(bp_set.size()) < n_bps) bp_set.insert(pos(rng));
  RandomPL out;
  for (int b : bp_set) out.bps.push_back(Rational(b) / 4);
  for (int i = 0; i <= n_bps; ++i) out.slopes.push_back(slope_pool[pick(rng)]);
  out.anchor = {0, Rational(off(rng)) / 8};
  out.map = PLMap::from_slopes(out.bps, out.slopes, out.anchor);
  return out;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("2.5e-1") == Rational(1, 4));
  CHECK(parse_rational(" 7 ") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(to_string(Rational(-6) / 4) == "-3/2");
}

TEST_CASE("simplest rational in an interval") {
  CHECK(simplest_between(Rational(999, 1000), Rational(1001, 1000)) == 1);
  CHECK(simplest_between(Rational(31, 100), Rational(34, 100)) == Rational(1, 3));
  CHECK(simplest_between(Rational(-34, 100), Rational(-31, 100)) == Rational(-1, 3));
  CHECK(simplest_between(Rational(-1, 7), Rational(1, 9)) == 0);
}

TEST_CASE("PL evaluation matches slope integration") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    RandomPL f = random_pl(rng, 1 + trial % 4);
    for (int k = -40; k <= 40; k += 3) {
      Rational x = Rational(k) / 7;
      CHECK(f.map(x) == oracle::pl_eval(f.bps, f.slopes, f.anchor, x));
    }
  }
}

TEST_CASE("PL group laws hold exactly") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    PLMap f = random_pl(rng, 2).map, g = random_pl(rng, 3).map, h = random_pl(rng, 1).map;
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    CHECK(compose(f, f.inverse()).is_identity());
    CHECK(compose(f.inverse(), f).is_identity());
    CHECK(power(f, 3) == compose(f, compose(f, f)));
    CHECK(power(f, -2) == compose(f.inverse(), f.inverse()));
    for (int k = -10; k <= 10; ++k) {
      Rational x = Rational(k) / 3;
      CHECK(compose(f, g)(x) == f(g(x)));
    }
  }
}

TEST_CASE("normalized representation: equal maps have equal keys") {
  PLMap f = PLMap::from_slopes({0, 1}, {2, 2, 2}, {0, 0});
  CHECK(f.is_affine());
  CHECK(f == PLMap::affine(2, 0));
  CHECK(f.key() == PLMap::affine(2, 0).key());
  CHECK_THROWS_AS(PLMap::from_slopes({0}, {1, -1}, {0, 0}), Error);
  CHECK_THROWS_AS(PLMap::from_slopes({1, 0}, {1, 2, 1}, {0, 0}), Error);
}

TEST_CASE("exact fixed points agree with a breakpoint sign scan") {
  std::mt19937 rng(23);
  int checked = 0;
  const Rational far(1000000);
  for (int trial = 0; trial < 300; ++trial) {
    RandomPL f = random_pl(rng, 1 + trial % 4);
    PLFixedSet fs = f.map.fixed_points();
    int expect = oracle::pl_fixed_count(f.bps, f.slopes, f.anchor, far);
    if (expect < 0) {
      CHECK_FALSE(fs.intervals.empty());
      continue;
    }
    bool beyond = false;
    for (const auto& p : fs.points) beyond = beyond || abs(p) >= far;
    if (beyond) continue;
    CHECK(fs.intervals.empty());
    CHECK(static_cast<int>(fs.points.size()) == expect);
    for (const auto& p : fs.points) CHECK(f.map(p) == p);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("numeric fixed point search finds transversal crossings") {
  LineMap g = PLMap::from_slopes({0, 1}, {2, Rational(1, 2), 2}, {0, 0});
  int grid = oracle::grid_fixed_points([&](double x) { return g(x); }, -4.0, 4.0, 8000);
  CHECK(grid == 2);
  CHECK(fixed_points(g).count == FixedCount::TwoOrMore);
}

TEST_CASE("fixed interval is reported as two or more") {
  PLMap f = PLMap::from_slopes({0, 1}, {2, 1, 2}, {0, 0});
  FixedPointReport r = fixed_points(f);
  CHECK(r.exact);
  CHECK(r.count == FixedCount::TwoOrMore);
  REQUIRE(r.intervals.size() == 1);
  CHECK(*r.intervals[0].lo == 0);
  CHECK(*r.intervals[0].hi == 1);
}

TEST_CASE("BS(1,2) words realize the affine composition") {
  Action bs = bs12();
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> letter(0, 3), len(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> ls(static_cast<std::size_t>(len(rng)));
    std::vector<Letter> word;
    for (auto& l : ls) {
      l = letter(rng);
      word.push_back({l / 2, l % 2 == 0 ? 1L : -1L});
    }
    oracle::Aff expect = oracle::bs_word(ls);
    PLMap got = bs.realize(Word(word)).pl();
    REQUIRE(got.is_affine());
    CHECK(got.germ().slope == expect.a);
    CHECK(got.germ().intercept == expect.b);
  }
}

TEST_CASE("BS(1,2) relation b a b^-1 = a^2") {
  Action bs = bs12();
  Word w({{1, 1}, {0, 1}, {1, -1}});
  CHECK(bs.realize(w) == bs.realize(Word::generator(0, 2)));
  CHECK(bs.format(w) == "b a b^-1");
}

TEST_CASE("enumerated BS(1,2) ball sizes match breadth-first search") {
  std::vector<std::size_t> expect = oracle::bs_ball_sizes(6);
  Action bs = bs12();
  for (int n = 1; n <= 6; ++n) {
    CHECK(enumerate_elements(bs, n).size() + 1 == expect[static_cast<std::size_t>(n)]);
    CHECK(enumerate_elements(bs, n, {.include_identity = true}).size() == expect[static_cast<std::size_t>(n)]);
  }
  CHECK(enumerate_elements(bs, 4).size() == 92);
}

TEST_CASE("enumeration without dedup lists every reduced word") {
  Action bs = bs12();
  // reduced words of length exactly k over a^+-1, b^+-1: 4 * 3^(k-1)
  std::size_t total = 0, term = 4;
  for (int k = 1; k <= 5; ++k, term *= 3) total += term;
  CHECK(enumerate_elements(bs, 5, {.include_identity = false, .dedup = false}).size() == total);
}

TEST_CASE("words reduce and invert") {
  Word w({{0, 2}, {0, -2}, {1, 1}});
  CHECK(w.length() == 1);
  Word u({{0, 1}, {1, -3}});
  CHECK((u * u.inverse()).empty());
  CHECK(commutator(u, Word::generator(0)).length() == 10);
  CHECK(Word().to_string({"a"}) == "e");
}

TEST_CASE("sine-perturbed translation") {
  SineMap f = SineMap::make(0.3, 0.1);
  for (double x = -2; x <= 2; x += 0.37) {
    CHECK(f.backward(f.forward(x)) == doctest::Approx(x).epsilon(1e-12));
    CHECK(f.forward(x + 1) == doctest::Approx(f.forward(x) + 1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(SineMap::make(0.3, 0.2), Error);
  LineMap g = LineMap::sine_perturbed_translation(0.3, 0.1);
  LineMap gg = compose(g, invert(g));
  for (double x = -1; x <= 1; x += 0.25) CHECK(gg(x) == doctest::Approx(x).epsilon(1e-11));
  CHECK(fixed_points(g, Interval::closed(-4, 4)).count == FixedCount::Zero);
}

TEST_CASE("crossing counts") {
  LineMap f = PLMap::affine(2, 0), g = PLMap::affine(1, 1);
  CHECK(crossing_count(f, g, 3).count == 1);
  CHECK(crossing_count(f, f, 3).equal);
}

TEST_CASE("intervals") {
  Interval J = Interval::closed(Rational(1, 4), Rational(1, 2));
  CHECK(J.length() == Rational(1, 4));
  CHECK(J.contains(Rational(1, 3)));
  CHECK_FALSE(J.contains(1));
  CHECK(J.describe() == "[1/4, 1/2]");
  CHECK_THROWS_AS(Interval::closed(1, 1), Error);
  CHECK_THROWS_AS(Interval::whole_line().length(), Error);
}
