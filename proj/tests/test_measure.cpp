#include <doctest.h>

#include <random>

#include "lineact/constructions.hpp"
#include "oracle.hpp"

using namespace lineact;

namespace {

std::vector<int> random_letters(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), letter(0, 3);
  std::vector<int> out(static_cast<std::size_t>(len(rng)));
  for (auto& l : out) l = letter(rng);
  return out;
}

Word to_word(const std::vector<int>& ls) {
  std::vector<Letter> w;
  for (int l : ls) w.push_back({l / 2, l % 2 == 0 ? 1L : -1L});
  return Word(w);
}

}  // namespace

TEST_CASE("affine map composition") {
  AffineMap f{2, 1}, g{Rational(1, 2), 3};
  for (int k = -5; k <= 5; ++k) CHECK((f * g)(Rational(k)) == f(g(Rational(k))));
  CHECK(f * f.inverse() == AffineMap{});
}

TEST_CASE("phi on BS(1,2) with Lebesgue measure") {
  Measure mu = Measure::lebesgue();
  Action bs = bs12();
  PhiResult a = phi(mu, bs.generators[0].map), b = phi(mu, bs.generators[1].map);
  CHECK(a.exact);
  CHECK(a.map == AffineMap{1, 1});
  CHECK(b.map == AffineMap{2, 0});
}

TEST_CASE("phi is a homomorphism and equals the affine action itself") {
  Measure mu = Measure::lebesgue();
  Action bs = bs12();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto u = random_letters(rng, 6), v = random_letters(rng, 6);
    LineMap fu = bs.realize(to_word(u)), fv = bs.realize(to_word(v));
    PhiResult pu = phi(mu, fu), pv = phi(mu, fv), puv = phi(mu, compose(fu, fv));
    CHECK(puv.map == pu.map * pv.map);
    std::vector<int> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    oracle::Aff expect = oracle::bs_word(uv);
    CHECK(puv.map.a == expect.a);
    CHECK(puv.map.b == expect.b);
  }
}

TEST_CASE("Lebesgue is not quasi-invariant for a PL map with a breakpoint") {
  LineMap f = PLMap::from_slopes({Rational(1, 2)}, {1, 2}, {0, 0});
  CHECK_THROWS_WITH_AS(scaling_factor(Measure::lebesgue(), f), "measure not quasi-invariant for g at tolerance", Error);
}

TEST_CASE("pullback measure masses follow the collapse map") {
  // flat on [1, 2]
  MonotonePL c({{0, 0}, {1, 1}, {2, 1}, {3, 2}}, 1, 1);
  Measure mu = Measure::pullback(c);
  CHECK(*mu.nu_exact(0, 3) == 2);
  CHECK(*mu.nu_exact(Rational(1), Rational(2)) == 0);
  CHECK(*mu.nu_exact(Rational(1, 2), Rational(5, 2)) == 1);
  CHECK(mu.nu(-1.0, 0.0) == doctest::Approx(1.0));
  CHECK(mu.nu(3.0, 2.0) == doctest::Approx(-1.0));
  CHECK(mu.kind() == "pullback");
  CHECK(mu.tolerance() == kPullbackTolerance);
  CHECK(*theta_exact(mu, Rational(3, 2)) == 1);
}

TEST_CASE("translation numbers") {
  Measure mu = Measure::lebesgue();
  TranslationNumber t = translation_number(mu, PLMap::translation(Rational(1, 3)));
  REQUIRE(t.exact);
  CHECK(*t.exact == Rational(1, 3));
  CHECK(t.spread == 0);
  CHECK_THROWS_WITH_AS(translation_number(mu, PLMap::affine(2, 0)), "translation number undefined off kernel of A",
                       Error);
}

TEST_CASE("kernel dichotomy on BS(1,2)") {
  Measure mu = Measure::lebesgue();
  for (const auto& e : enumerate_elements(bs12(), 4)) {
    DichotomyReport d = kernel_fixed_point_dichotomy(mu, e.map);
    CHECK(d.consistent);
    bool translation = e.map.pl().germ().slope == 1;
    CHECK((d.fixed == FixedCount::Zero) == translation);
  }
}

TEST_CASE("semiconjugacy on a blow-up") {
  BlowupSpec spec{bs12(), Rational(1, 29), Rational(1, 10), Rational(1, 2), 5};
  Blowup b = blowup(spec);
  Measure mu = b.measure();
  Residual r = semiconjugacy_residual(mu, b.action, 1000);
  CHECK(r.exact);
  CHECK(r.points == 2000);
  CHECK(r.max <= 1e-9);
  CHECK(phi(mu, b.action.generators[0].map).map == AffineMap{1, 1});
  CHECK(phi(mu, b.action.generators[1].map).map.a == 2);
}

TEST_CASE("rectifying a translation-like map") {
  Rectification r = rectify_free_element(PLMap::translation(2));
  CHECK(r.exact_global);
  CHECK(r.direction == 1);
  for (int k = -6; k <= 6; ++k) {
    Rational y(k);
    CHECK(r.c(y + 2) == r.c(y) + 1);
  }
  Rectification back = rectify_free_element(PLMap::translation(-3));
  CHECK(back.direction == -1);
  LineMap h = PLMap::from_slopes({0}, {1, 2}, {0, 1});
  Rectification w = rectify_free_element(h);
  CHECK_FALSE(w.exact_global);
  for (int k = -4; k <= 4; ++k) {
    Rational y(k);
    if (w.window.contains(y) && w.window.contains(h.pl()(y))) CHECK(w.c(h.pl()(y)) == w.c(y) + 1);
  }
  CHECK_THROWS_AS(rectify_free_element(PLMap::affine(2, 0)), Error);
}

TEST_CASE("empirical measure is normalized by the free element") {
  EmpiricalParams p;
  p.free_element = Word::generator(0);
  p.orbit_length = 5;
  Measure mu = Measure::empirical(bs12(), p);
  CHECK(mu.kind() == "empirical");
  CHECK_FALSE(mu.exact());
  CHECK(mu.tolerance() == kEmpiricalTolerance);
  CHECK(mu.nu(0.25, 1.25) == doctest::Approx(1.0).epsilon(1e-12));
  double prev = -INFINITY;
  for (double x = -2; x <= 2; x += 0.125) {
    double t = theta(mu, x);
    CHECK(t >= prev);
    prev = t;
  }
  MassEstimate m = mu.nu_with_error(0.0, 0.5);
  CHECK(m.error >= 0);
  CHECK(m.value >= 0);
  CHECK(m.value <= 1);
}
