#include <doctest.h>

#include "lineact/constructions.hpp"
#include "lineact/report.hpp"
#include "oracle.hpp"

using namespace lineact;

TEST_CASE("blow-up at a point with a nontrivial stabilizer") {
  // 4x - 1 fixes 1/3
  oracle::Aff w = oracle::bs_word({1, 2, 2});
  CHECK(w == oracle::Aff{4, -1});
  CHECK(w(oracle::Q(1, 3)) == oracle::Q(1, 3));
  Action bs = bs12();
  try {
    blowup({bs, Rational(1, 3), Rational(1, 10), Rational(1, 2), 5});
    FAIL("expected a stabilizer error");
  } catch (const StabilizerError& e) {
    CHECK(std::string(e.what()) == "base point has a nontrivial stabilizer: a^-1 b^2 fixes 1/3");
    CHECK(bs.format(e.word()) == "a^-1 b^2");
    CHECK(bs.realize(e.word())(Rational(1, 3)) == Rational(1, 3));
  }
}

TEST_CASE("blow-up at 1/29 inserts one gap per ball element") {
  const int depth = 5;
  Blowup b = blowup({bs12(), Rational(1, 29), Rational(1, 10), Rational(1, 2), depth});
  CHECK(b.gaps.size() == oracle::bs_ball_sizes(depth)[depth]);
  CHECK(b.gaps.size() == 191);
  for (std::size_t i = 0; i < b.gaps.size(); ++i) {
    const Gap& g = b.gaps[i];
    CHECK(g.hi - g.lo == Rational(1, 10) * pow(Rational(1, 2), static_cast<unsigned long>(g.word.length())));
    if (i > 0) CHECK(b.gaps[i - 1].hi < g.lo);
    CHECK(b.collapse(g.lo) == g.point);
    CHECK(b.collapse(g.hi) == g.point);
    CHECK(b.collapse((g.lo + g.hi) / 2) == g.point);
  }
  CHECK(b.gap_at(Rational(1, 29)).word.empty());
  CHECK_THROWS_AS(b.gap_at(Rational(1, 31)), Error);
}

TEST_CASE("blown-up generators permute gaps and intertwine with the collapse") {
  Action base = bs12();
  Blowup b = blowup({base, Rational(1, 29), Rational(1, 10), Rational(1, 2), 4});
  for (const Gap& g : b.gaps) {
    if (g.word.length() >= 4) continue;
    for (std::size_t k = 0; k < base.generators.size(); ++k) {
      const LineMap& up = b.action.generators[k].map;
      const LineMap& down = base.generators[k].map;
      Rational lo = up(g.lo), hi = up(g.hi);
      const Gap& target = b.gap_at(down(g.point));
      CHECK(lo == target.lo);
      CHECK(hi == target.hi);
    }
  }
  for (int i = -40; i <= 40; ++i) {
    Rational x = Rational(i) / 13;
    for (std::size_t k = 0; k < base.generators.size(); ++k) {
      double lhs = b.collapse(b.action.generators[k].map(x)).get_d();
      double rhs = base.generators[k].map(b.collapse(x)).get_d();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("certificates must stay below the truncation depth") {
  Blowup b = blowup({bs12(), Rational(1, 29), Rational(1, 10), Rational(1, 2), 5});
  CHECK_NOTHROW(require_depth(b, 4));
  CHECK_THROWS_AS(require_depth(b, 5), Error);
  CHECK_THROWS_AS(blowup({bs12(), Rational(1, 29), Rational(1, 10), Rational(3, 2), 3}), Error);
}

TEST_CASE("random PL actions are deterministic and honor constraints") {
  RandomConstraints c;
  c.fixed_points_in = Interval::closed(0, 1);
  Action a = random_pl_action(42, 2, 3, c), b = random_pl_action(42, 2, 3, c), d = random_pl_action(43, 2, 3, c);
  REQUIRE(a.generators.size() == 2);
  CHECK(a.generators[0].map == b.generators[0].map);
  CHECK(a.generators[1].map == b.generators[1].map);
  CHECK_FALSE((a.generators[0].map == d.generators[0].map && a.generators[1].map == d.generators[1].map));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Action r = random_pl_action(seed, 2, 3, c);
    for (const auto& g : r.generators) {
      PLFixedSet fs = g.map.pl().fixed_points();
      for (const auto& p : fs.points) {
        CHECK(p >= 0);
        CHECK(p <= 1);
      }
      for (const auto& iv : fs.intervals) {
        CHECK(*iv.lo >= 0);
        CHECK(*iv.hi <= 1);
      }
    }
  }
  RandomConstraints one;
  one.max_fixed_points = 1;
  for (const auto& g : random_pl_action(7, 3, 2, one).generators) {
    PLFixedSet fs = g.map.pl().fixed_points();
    CHECK(fs.intervals.empty());
    CHECK(fs.points.size() <= 1);
  }
}

TEST_CASE("affine actions from pairs") {
  Action a = affine_action({{2, 0}, {1, 1}});
  CHECK(a.generators.size() == 2);
  CHECK(a.generators[0].map(Rational(3)) == 6);
  CHECK(a.generators[1].map(Rational(3)) == 4);
}

TEST_CASE("short-word certificates of bounded fixed sets are checked against longer words") {
  // 2x - 7/16 and x/2 + 1/4: every word of length <= 6 fixes a point of [0, 1],
  // but the commutator is x + 1/32 and c^m (2x - 7/16) fixes 7/16 - m/32
  Action a = affine_action({{2, Rational(-7, 16)}, {Rational(1, 2), Rational(1, 4)}});
  CheckResult r = check_compact_fixed_abelian(a, 6, Interval::closed(0, 1));
  CHECK(r.verdict == Verdict::NotApplicable);
  REQUIRE(r.data.contains("hypothesis_fails_beyond_word_len"));
  CHECK(r.data["commutator"]["map"] == "affine(1,1/32)");
  const nlohmann::json& w = r.data["hypothesis_fails_beyond_word_len"];
  CHECK(w["length"].get<std::size_t>() > 6);

  Action commuting = affine_action({{2, Rational(-1, 2)}, {3, -1}});  // both fix 1/2
  CHECK(check_compact_fixed_abelian(commuting, 6, Interval::closed(0, 1)).verdict == Verdict::Pass);
}
