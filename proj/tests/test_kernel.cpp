#include <gtest/gtest.h>

#include "gen.hpp"
#include "relend/kernel.hpp"

using namespace relend;

namespace {

std::vector<GroupSpec> families() {
  return {GroupSpec::zd(2),
          GroupSpec::zd(2, {0}),
          GroupSpec::zd(3, {0}),
          GroupSpec::free(2),
          GroupSpec::bs(1, 2),
          GroupSpec::bs(2, 3),
          GroupSpec::cyclic(4),
          GroupSpec::direct_product(GroupSpec::bs(1, 2), GroupSpec::zd(1))};
}

}  // namespace

TEST(Kernel, SubgroupMembership) {
  Group Z2(GroupSpec::zd(2, {0}));
  EXPECT_TRUE(Z2.in_subgroup(Z2.parse("a a a")));
  EXPECT_FALSE(Z2.in_subgroup(Z2.parse("a a a b")));
  Group B(GroupSpec::bs(1, 2));
  EXPECT_TRUE(B.in_subgroup(B.parse("x x x x x")));
  EXPECT_FALSE(B.in_subgroup(B.parse("t")));
  EXPECT_TRUE(B.in_subgroup(B.parse("T x t")));
}

TEST(Kernel, CosetRepExamples) {
  Group Z2(GroupSpec::zd(2, {0}));
  EXPECT_EQ(Z2.format(coset_of(Z2, Z2.parse("a a a b b b b b")).rep), "b b b b b");
  EXPECT_TRUE(coset_of(Z2, Z2.parse("A A")).rep.is_identity());
  Group B(GroupSpec::bs(1, 2));
  const Element g = B.parse("x x x t");
  const CosetId c = coset_of(B, g);
  EXPECT_EQ(B.format(c.rep), "t");
  EXPECT_TRUE(B.in_subgroup(B.mul(B.inv(c.rep), g)));
}

TEST(Kernel, DeltaExamples) {
  Group Z2(GroupSpec::zd(2, {0}));
  EXPECT_EQ(Z2.format(delta(Z2, Z2.parse("a b b"), base_coset())), "a");
  EXPECT_TRUE(delta(Z2, Z2.identity(), coset_of(Z2, Z2.parse("b"))).is_identity());
  const Element k = Z2.parse("a a a");
  EXPECT_EQ(delta(Z2, k, base_coset()), k);
}

TEST(Kernel, WitnessExamples) {
  Group B(GroupSpec::bs(1, 2));
  const Letter T = *B.parse_letter("T");
  const Witness w = witness(B, T);
  ASSERT_EQ(w.F.size(), 2u);
  EXPECT_EQ(B.format(w.F[0]), "T");
  EXPECT_EQ(B.format(w.F[1]), "x T");
  EXPECT_TRUE(verify_witness(B, w, 8));
  EXPECT_FALSE(verify_witness(B, Witness{T, {B.parse("T")}}, 2));
  const Witness wx = witness(B, *B.parse_letter("x"));
  ASSERT_EQ(wx.F.size(), 1u);
  EXPECT_TRUE(wx.F[0].is_identity());
  Group Z(GroupSpec::zd(2));
  EXPECT_EQ(witness(Z, 0).F, std::vector<Element>{Z.parse("a")});
}

TEST(Kernel, SeparatedElement) {
  Group Z2(GroupSpec::zd(2, {0}));
  auto g = find_separated_element(Z2, {Z2.identity()}, {Z2.identity()}, 2);
  ASSERT_TRUE(g.has_value());
  EXPECT_FALSE(Z2.in_subgroup(*g));
  EXPECT_EQ(Z2.format(*g), "b");
  auto any = find_separated_element(Z2, {}, {}, 1);
  ASSERT_TRUE(any.has_value());
  EXPECT_EQ(Z2.format(*any), "a");
  Group Full(GroupSpec::zd(1, {0}));
  for (int R = 0; R <= 5; ++R) EXPECT_FALSE(find_separated_element(Full, {Full.identity()}, {Full.identity()}, R));
}

TEST(Kernel, SeparatedElementAvoidsDoubleCosets) {
  Group B(GroupSpec::bs(1, 2));
  const std::vector<Element> F{B.identity(), B.parse("t")};
  const std::vector<Element> Fp{B.parse("T")};
  auto g = find_separated_element(B, F, Fp, 4);
  ASSERT_TRUE(g.has_value());
  for (const auto& f : F)
    for (const auto& fp : Fp) EXPECT_FALSE(B.in_subgroup(B.mul(B.inv(f), *g, fp)));
}

TEST(KernelProperty, WitnessesVerifyAndAreTight) {
  for (const auto& spec : families()) {
    Group G(spec);
    for (Letter s = 0; s < G.num_letters(); ++s) {
      const Witness w = witness(G, s);
      EXPECT_TRUE(verify_witness(G, w, 8)) << G.letter_name(s);
      EXPECT_TRUE(witness_is_tight(G, w)) << G.letter_name(s);
    }
  }
}

TEST(KernelProperty, CosetRepIsCanonical) {
  gen::Rng rng(21);
  for (const auto& spec : families()) {
    Group G(spec);
    const auto kball = word_ball(G, 3, G.subgroup_letters());
    for (int i = 0; i < 150; ++i) {
      const Element g = gen::element(rng, G, 8);
      const CosetId c = coset_of(G, g);
      EXPECT_EQ(coset_of(G, c.rep), c);
      EXPECT_TRUE(G.in_subgroup(G.mul(G.inv(c.rep), g)));
      const Element k = kball[rng() % kball.size()].element;
      EXPECT_EQ(coset_of(G, G.mul(g, k)), c);
    }
    EXPECT_TRUE(coset_of(G, G.identity()).rep.is_identity());
  }
}

TEST(KernelProperty, DeltaIsACocycle) {
  gen::Rng rng(22);
  for (const auto& spec : families()) {
    Group G(spec);
    for (int i = 0; i < 300; ++i) {
      const Element g1 = gen::element(rng, G, 4);
      const Element g2 = gen::element(rng, G, 4);
      const CosetId s = coset_of(G, gen::element(rng, G, 4));
      const Element lhs = delta(G, G.mul(g1, g2), s);
      const Element rhs = G.mul(delta(G, g1, translate(G, g2, s)), delta(G, g2, s));
      EXPECT_EQ(lhs, rhs);
      EXPECT_TRUE(G.in_subgroup(lhs));
    }
  }
}
