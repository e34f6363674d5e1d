#include <gtest/gtest.h>

#include "gen.hpp"
#include "relend/trivializer.hpp"

using namespace relend;

namespace {

const Group Z2h(GroupSpec::cyclic(2));

TrivializeOptions quick() {
  TrivializeOptions o;
  o.sweep_cases = 40;
  o.stream_cap = std::uint64_t{1} << 16;
  o.sampled_patterns = 2000;
  o.choice_patterns = 4;
  o.locality_pairs = 5;
  return o;
}

Pattern random_pattern(gen::Rng& rng, const Group& G, const Alphabet& X, int max_norm) {
  Pattern y;
  CosetGraph g(G, max_norm);
  for (const auto& v : g.vertices())
    if (rng() % 2 == 0) y.set(v, gen::uniform(rng, 0, X.size() - 1), X.x0());
  return y;
}

}  // namespace

TEST(Trivializer, PhiOfIdentityAndPlantedGenerators) {
  Group G(GroupSpec::zd(2));
  const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 21);
  Trivializer tz(c);
  EXPECT_TRUE(tz.phi(G.identity()).is_identity());
  const auto& p = *c.planted();
  for (int gen = 0; gen < 2; ++gen) {
    const Element b00 = p.b0_table[0];
    EXPECT_EQ(tz.phi(G.letter(make_letter(gen, false))),
              Z2h.mul(Z2h.inv(b00), p.phi0[static_cast<std::size_t>(gen)], b00));
  }
}

TEST(Trivializer, ChooseFarElement) {
  Group G(GroupSpec::zd(2));
  const auto c = constant_cocycle(G, Alphabet::trivial(G, 2), Z2h, {Z2h.identity(), Z2h.identity()});
  Trivializer tz(c);
  auto g = tz.choose_far_element(3, 6);
  ASSERT_TRUE(g);
  EXPECT_EQ(G.format(*g), "a a a a");
  auto s = tz.choose_far_element(0, 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(G.format(*s), "a");

  Group Full(GroupSpec::zd(1, {0}));
  const auto c1 = constant_cocycle(Full, Alphabet::trivial(Full, 2), Z2h, {Z2h.identity()});
  Trivializer t1(c1);
  for (int n = 1; n <= 4; ++n) EXPECT_FALSE(t1.choose_far_element(n, 8));
}

TEST(Trivializer, TransferOnPlantedSpec) {
  gen::Rng rng(61);
  for (const auto& spec : {GroupSpec::zd(2), GroupSpec::zd(3, {0})}) {
    Group G(spec);
    const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 22);
    Trivializer tz(c);
    const auto& p = *c.planted();
    EXPECT_TRUE(tz.transfer(Pattern{}).is_identity());
    for (int i = 0; i < 30; ++i) {
      const Pattern y = random_pattern(rng, G, c.alphabet(), 3);
      const Element expect = Z2h.mul(Z2h.inv(planted_b0(p, c.alphabet(), y)), p.b0_table[0]);
      EXPECT_EQ(tz.transfer(y), expect);
    }
  }
}

TEST(Trivializer, TransferOnNonabelianTarget) {
  // b(y) = b0(y)^-1 b0(0) holds in any H; here H is free.
  gen::Rng rng(62);
  Group G(GroupSpec::zd(2));
  const Group F(GroupSpec::free(2));
  const auto c = plant(G, Alphabet::trivial(G, 2), F, 0, 23);
  Trivializer tz(c);
  const auto& p = *c.planted();
  for (int i = 0; i < 20; ++i) {
    const Pattern y = random_pattern(rng, G, c.alphabet(), 3);
    EXPECT_EQ(tz.transfer(y), F.mul(F.inv(planted_b0(p, c.alphabet(), y)), p.b0_table[0]));
    const Element g = gen::element(rng, G, 4);
    EXPECT_TRUE(tz.verify_cohomology(g, y));
  }
}

TEST(Trivializer, ChoiceIndependenceAndNegativeControl) {
  gen::Rng rng(63);
  Group G(GroupSpec::zd(2));
  const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 24);
  Trivializer tz(c);
  EXPECT_TRUE(tz.verify_choice_independence(Pattern{}, 5));
  bool some_disagreement = false;
  for (int i = 0; i < 30; ++i) {
    const Pattern y = random_pattern(rng, G, c.alphabet(), 3);
    EXPECT_TRUE(tz.verify_choice_independence(y, 5));
    some_disagreement = some_disagreement || !tz.verify_choice_independence(y, 8, 0);
  }
  EXPECT_TRUE(some_disagreement);
}

TEST(Trivializer, CohomologyIdentity) {
  gen::Rng rng(64);
  Group G(GroupSpec::zd(3, {0}));
  const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 25);
  Trivializer tz(c);
  EXPECT_TRUE(tz.verify_cohomology(G.identity(), Pattern{}));
  for (int i = 0; i < 40; ++i)
    EXPECT_TRUE(tz.verify_cohomology(gen::element(rng, G, 4), random_pattern(rng, G, c.alphabet(), 3)));
}

TEST(Trivializer, LocalityAndItsNegativeControl) {
  gen::Rng rng(65);
  Group G(GroupSpec::zd(2));
  // Pick a plant whose b0 separates the two symbols.
  std::uint64_t seed = 26;
  while (true) {
    const auto t = plant(G, Alphabet::trivial(G, 2), Z2h, 0, seed).planted()->b0_table;
    if (t[0] != t[1]) break;
    ++seed;
  }
  const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, seed);
  Trivializer tz(c);
  EXPECT_TRUE(tz.verify_locality_3L(10, rng));
  // Changing the base cell alone moves b0 and hence b.
  bool differs = false;
  for (int i = 0; i < 20 && !differs; ++i) {
    Pattern y = random_pattern(rng, G, c.alphabet(), 3);
    Pattern z = y;
    z.set(base_coset(), 1 - y.get(base_coset(), 0), 0);
    differs = tz.transfer(y) != tz.transfer(z);
  }
  EXPECT_TRUE(differs);
}

TEST(Trivialize, ConstantHomomorphismGivesTrivialTransfer) {
  Group G(GroupSpec::zd(2));
  const Group Z(GroupSpec::zd(1));
  for (int L : {0, 1}) {
    const auto c = constant_cocycle(G, Alphabet::trivial(G, 2), Z, {Z.parse("a"), Z.parse("A A")}, L);
    const auto r = trivialize(c, quick());
    EXPECT_TRUE(r.report.ok()) << format_report(c, r);
    EXPECT_EQ(r.table.phi[0], Z.parse("a"));
    EXPECT_EQ(r.table.phi[1], Z.parse("A A"));
    for (const auto& [k, b] : r.table.b_entries) EXPECT_TRUE(b.is_identity());
    if (L == 0) {
      EXPECT_EQ(r.table.mode, TransferTable::Mode::Stored);
      EXPECT_EQ(r.table.b_entries.size(), 2u);
    }
  }
}

TEST(Trivialize, PlantedRoundTrip) {
  for (const auto& spec : {GroupSpec::zd(2), GroupSpec::zd(3, {0})}) {
    Group G(spec);
    const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 27);
    const auto r = trivialize(c, quick());
    EXPECT_TRUE(r.report.ok()) << format_report(c, r);
    EXPECT_EQ(r.table.mode, TransferTable::Mode::Sampled);
    EXPECT_EQ(r.report.planted_offset_constant, true);
  }
}

TEST(Trivialize, PlantedRoundTripWithTwistedAlphabet) {
  // K = first axis acts on {0,1,2} by a transposition fixing x0 = 0.
  Group G(GroupSpec::zd(3, {0}));
  const Alphabet X({"0", "1", "2"}, 0, {{0, 2, 1}, {}, {}});
  const auto c = plant(G, X, Group(GroupSpec::cyclic(3)), 0, 28);
  auto o = quick();
  o.sweep_cases = 20;
  const auto r = trivialize(c, o);
  EXPECT_TRUE(r.report.ok()) << format_report(c, r);
}

TEST(Trivialize, RejectsNonCocycle) {
  Group G(GroupSpec::zd(2));
  auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 29);
  c.set_entry(2, 5, Z2h.mul(c.table(2)[5], Z2h.parse("a")));
  try {
    trivialize(c, quick());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
}

TEST(Trivialize, RejectsPairsThatAreNotOneEnded) {
  for (const auto& spec : {GroupSpec::free(2), GroupSpec::zd(1), GroupSpec::zd(2, {0})}) {
    Group G(spec);
    const auto c = plant(G, Alphabet::trivial(G, 2), Z2h, 0, 30);
    std::vector<std::string> stages;
    auto o = quick();
    o.on_stage = [&](const std::string& s) { stages.push_back(s); };
    try {
      trivialize(c, o);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotOneEnded);
    }
    EXPECT_EQ(stages, std::vector<std::string>{"ends"});
  }
}
