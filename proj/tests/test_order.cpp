#include <doctest.h>

#include "lineact/constructions.hpp"
#include "oracle.hpp"

using namespace lineact;

namespace {

oracle::Aff as_aff(const LineMap& f) {
  const PLMap& p = f.pl();
  REQUIRE(p.is_affine());
  return {p.germ().slope, p.germ().intercept};
}

// sign of f - g far to the right, exact
Relation oracle_compare(const oracle::Aff& f, const oracle::Aff& g) {
  const oracle::Q X("1000000000000");
  int s = sgn(f(X) - g(X));
  return s > 0 ? Relation::Greater : s < 0 ? Relation::Less : Relation::Equal;
}

oracle::Aff aff_power(const oracle::Aff& f, long n) {
  oracle::Aff out, step = n < 0 ? f.inv() : f;
  for (long i = 0; i < std::abs(n); ++i) out = out.then_after(step);
  return out;
}

// least |n| (positive first) with g^-n < h < g^n; negative n for negative g
long oracle_commensurate_n(const oracle::Aff& g, const oracle::Aff& h) {
  for (long k = 1; k <= 64; ++k) {
    for (long n : {k, -k}) {
      if (oracle_compare(aff_power(g, -n), h) == Relation::Less && oracle_compare(h, aff_power(g, n)) == Relation::Less) {
        return n;
      }
    }
  }
  return 0;
}

Action pl_pair() {
  Action a;
  a.name = "pair";
  a.generators.push_back({"f", PLMap::from_slopes({0, 1}, {2, Rational(1, 2), 2}, {0, 0})});
  a.generators.push_back({"t", PLMap::translation(1)});
  return a;
}

}  // namespace

TEST_CASE("order on affine maps agrees with far-right evaluation") {
  Action bs = bs12();
  auto elems = enumerate_elements(bs, 3, {.include_identity = true});
  for (const auto& u : elems) {
    for (const auto& v : elems) {
      OrderResult r = compare(u.map, v.map);
      CHECK(r.relation == oracle_compare(as_aff(u.map), as_aff(v.map)));
      CHECK(r.exact);
      if (r.relation != Relation::Equal) {
        REQUIRE(r.exact_threshold);
        oracle::Q x = *r.exact_threshold + 1;
        int s = sgn(as_aff(u.map)(x) - as_aff(v.map)(x));
        CHECK(s == (r.relation == Relation::Greater ? 1 : -1));
      }
    }
  }
}

TEST_CASE("order is bi-invariant under generators") {
  Action bs = bs12();
  auto elems = enumerate_elements(bs, 3, {.include_identity = true});
  std::vector<LineMap> letters;
  for (const auto& g : bs.generators) {
    letters.push_back(g.map);
    letters.push_back(invert(g.map));
  }
  for (std::size_t i = 0; i < elems.size(); i += 3) {
    for (std::size_t j = 0; j < elems.size(); j += 2) {
      Relation r = compare(elems[i].map, elems[j].map).relation;
      for (const auto& f : letters) {
        CHECK(compare(compose(f, elems[i].map), compose(f, elems[j].map)).relation == r);
        CHECK(compare(compose(elems[i].map, f), compose(elems[j].map, f)).relation == r);
      }
    }
  }
}

TEST_CASE("PL comparison uses germs and reports a threshold") {
  LineMap f = PLMap::from_slopes({0}, {1, 2}, {0, 0});
  LineMap g = PLMap::translation(5);
  OrderResult r = compare(f, g);
  CHECK(r.relation == Relation::Greater);
  REQUIRE(r.exact_threshold);
  CHECK(f(*r.exact_threshold + 1) > g(*r.exact_threshold + 1));
  CHECK(is_positive(f));
  CHECK_FALSE(is_positive(invert(f)));
}

TEST_CASE("numeric comparison of sine-perturbed maps") {
  LineMap f = LineMap::sine_perturbed_translation(0.3, 0.1);
  CHECK(compare(f, PLMap::translation(Rational(1, 10))).relation == Relation::Greater);
  CHECK(compare(f, PLMap::translation(1)).relation == Relation::Less);
  CHECK_FALSE(compare(f, PLMap::translation(1)).exact);
}

TEST_CASE("commensurability witnesses are minimal") {
  LineMap two = PLMap::affine(2, 0), three = PLMap::affine(3, 0);
  Commensurability c = commensurate(two, three);
  CHECK(c.yes);
  CHECK(c.n == 2);
  CHECK(c.m == 1);
  CHECK(c.n == oracle_commensurate_n(as_aff(two), as_aff(three)));
  CHECK(c.m == oracle_commensurate_n(as_aff(three), as_aff(two)));

  Commensurability t = commensurate(PLMap::translation(1), PLMap::translation(3));
  CHECK(t.yes);
  CHECK(t.n == 4);
  CHECK(t.m == 1);

  Commensurability no = commensurate(PLMap::translation(1), PLMap::affine(2, 0));
  CHECK_FALSE(no.yes);
  CHECK(no.proof);
}

TEST_CASE("commensurability of BS(1,2) elements with fixed points") {
  Action bs = bs12();
  std::vector<Element> fixed;
  for (const auto& e : enumerate_elements(bs, 3)) {
    if (as_aff(e.map).a != 1) fixed.push_back(e);
  }
  for (std::size_t i = 0; i < fixed.size(); i += 2) {
    for (std::size_t j = 1; j < fixed.size(); j += 3) {
      Commensurability c = commensurate(fixed[i].map, fixed[j].map);
      CHECK(c.yes);
      CHECK(c.n == oracle_commensurate_n(as_aff(fixed[i].map), as_aff(fixed[j].map)));
    }
  }
}

TEST_CASE("dominating power") {
  LineMap h = PLMap::affine(2, 0), g = PLMap::translation(10);
  long n = dominating_power(h, g);
  oracle::Aff hn = aff_power(as_aff(h), n);
  CHECK(oracle_compare(hn, as_aff(g)) == Relation::Greater);
  CHECK(oracle_compare(aff_power(as_aff(h), -n), as_aff(g).inv()) == Relation::Less);
  for (long k = 1; k < std::abs(n); ++k) {
    bool ok = oracle_compare(aff_power(as_aff(h), k), as_aff(g)) == Relation::Greater &&
              oracle_compare(aff_power(as_aff(h), -k), as_aff(g).inv()) == Relation::Less;
    CHECK_FALSE(ok);
  }
  CHECK(dominating_power(PLMap::affine(Rational(1, 2), 0), g) < 0);
}

TEST_CASE("infinitesimals") {
  InfinitesimalResult r = is_infinitesimal(PLMap::translation(1), PLMap::affine(2, 0));
  CHECK(r.yes);
  CHECK(r.exact);
  InfinitesimalResult s = is_infinitesimal(PLMap::affine(2, 0), PLMap::translation(1));
  CHECK_FALSE(s.yes);
  REQUIRE(s.witness);
  CHECK(*s.witness == 1);
  InfinitesimalResult t = is_infinitesimal(PLMap::translation(1), PLMap::translation(Rational(7, 2)));
  CHECK_FALSE(t.yes);
  CHECK(*t.witness == 4);
}

TEST_CASE("infinitesimal subgroup of BS(1,2) is the translation subgroup") {
  InfinitesimalSample s = infinitesimal_subgroup_sample(bs12(), 4);
  CHECK_FALSE(s.free_action);
  REQUIRE(s.reference);
  CHECK(s.reference_independent);
  std::size_t translations = 0;
  for (const auto& e : enumerate_elements(bs12(), 4, {.include_identity = true})) {
    if (as_aff(e.map).a == 1) ++translations;
  }
  CHECK(s.members.size() == translations);
  for (const auto& m : s.members) CHECK(as_aff(m.map).a == 1);
}

TEST_CASE("hypothesis check") {
  HypothesisResult ok = hypothesis_check(bs12(), 6);
  CHECK(ok.pass);
  CHECK(ok.elements_checked == 374);
  HypothesisResult bad = hypothesis_check(pl_pair(), 4);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.offender);
  CHECK(bad.offender->word.length() == 1);
  CHECK(bad.offender_fixed_points.count == FixedCount::TwoOrMore);
}

TEST_CASE("commuting pairs are classified") {
  CHECK(commute_classify(PLMap::affine(2, 0), PLMap::affine(3, 0)).kind == CommuteResult::Kind::CommonFixedPoint);
  CHECK(commute_classify(PLMap::translation(1), PLMap::translation(2)).kind == CommuteResult::Kind::FreePair);
  CommuteResult n = commute_classify(PLMap::affine(2, 0), PLMap::translation(1));
  CHECK(n.kind == CommuteResult::Kind::NotCommute);
}

TEST_CASE("abelian and metabelian checks on BS(1,2)") {
  Action bs = bs12();
  AbelianResult ab = abelian_check(bs, 3);
  CHECK_FALSE(ab.abelian);
  REQUIRE(ab.commutator);
  CHECK(as_aff(*ab.commutator) == oracle::Aff{1, -1});
  CHECK(bs.format(ab.witness->first) == "a");
  CHECK(bs.format(ab.witness->second) == "b");

  MetabelianResult m = metabelian_check(bs, 6);
  CHECK(m.pass);
  CHECK(m.infinitesimal_checked);
  CHECK(m.commutators == 99);
  for (const auto& c : m.sampled_commutators) CHECK(as_aff(c.map).a == 1);

  Action t = affine_action({{1, 1}, {1, Rational(1, 3)}});
  CHECK(abelian_check(t, 4).abelian);
}

TEST_CASE("metabelian check rejects a group with two fixed points") {
  bool rejected = false;
  try {
    rejected = !metabelian_check(pl_pair(), 4).pass;
  } catch (const HypothesisViolation& e) {
    rejected = true;
    CHECK(e.word().length() >= 1);
  }
  CHECK(rejected);
}
