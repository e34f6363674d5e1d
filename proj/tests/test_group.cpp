#include <gtest/gtest.h>

#include <map>

#include "gen.hpp"
#include "relend/group.hpp"

using namespace relend;

namespace {

// Independent models used as oracles.

std::vector<std::int64_t> zd_vector(int d, const std::vector<Letter>& w) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(d), 0);
  for (Letter l : w) v[static_cast<std::size_t>(gen_of(l))] += is_inverse_letter(l) ? -1 : 1;
  return v;
}

std::vector<Letter> free_reduce(const std::vector<Letter>& w) {
  std::vector<Letter> st;
  for (Letter l : w) {
    if (!st.empty() && st.back() == inverse_letter(l)) st.pop_back();
    else st.push_back(l);
  }
  return st;
}

// BS(1,2) is faithfully represented by z -> 2^k z + b with b dyadic.
// x is z -> z + 1, t is z -> z / 2. Composition follows word order as
// matrices: the word w1 w2 maps to M(w1) M(w2).
struct Affine {
  std::int64_t scale_exp = 0;  // a = 2^scale_exp
  std::int64_t shift = 0;      // b = shift / 2^40
  bool operator==(const Affine&) const = default;
};

Affine compose(const Affine& p, const Affine& q) {
  // (p q)(z) = p(q(z)) = a_p (a_q z + b_q) + b_p
  Affine r;
  r.scale_exp = p.scale_exp + q.scale_exp;
  std::int64_t bq = q.shift;
  if (p.scale_exp >= 0) bq <<= p.scale_exp;
  else bq >>= -p.scale_exp;
  r.shift = bq + p.shift;
  return r;
}

Affine bs12_affine(const std::vector<Letter>& w) {
  constexpr std::int64_t one = std::int64_t{1} << 40;
  Affine acc;
  for (Letter l : w) {
    Affine step;
    if (gen_of(l) == 0) step.shift = is_inverse_letter(l) ? -one : one;
    else step.scale_exp = is_inverse_letter(l) ? 1 : -1;
    acc = compose(acc, step);
  }
  return acc;
}

}  // namespace

TEST(Group, ZdMultiplicationExamples) {
  Group G(GroupSpec::zd(2));
  EXPECT_EQ(G.mul(G.parse("a"), G.parse("b")), G.parse("a b"));
  Group G3(GroupSpec::zd(3));
  EXPECT_EQ(G3.inv(G3.parse("a b b C")), G3.parse("A B B c"));
  EXPECT_EQ(G3.format(G3.parse("c a C b")), "a b");
}

TEST(Group, FreeReductionExamples) {
  Group G(GroupSpec::free(2));
  EXPECT_TRUE(G.mul(G.parse("a"), G.parse("A")).is_identity());
  EXPECT_EQ(G.format(G.inv(G.parse("a b"))), "B A");
  EXPECT_EQ(G.format(G.identity()), "1");
  EXPECT_TRUE(G.parse("1").is_identity());
  EXPECT_TRUE(G.parse("").is_identity());
}

TEST(Group, BaumslagSolitarRewrite) {
  Group G(GroupSpec::bs(1, 2));
  EXPECT_EQ(G.format(G.mul(G.parse("x"), G.parse("t"))), "t x x");
  EXPECT_EQ(G.format(G.parse("x x x t")), "t x x x x x x");
  EXPECT_EQ(G.format(G.parse("x T")), "x T");
  EXPECT_EQ(G.format(G.parse("x x T")), "T x");
  EXPECT_TRUE(G.from_letters(G.relators()[0]).is_identity());
}

TEST(Group, UnknownLetterIsConfigError) {
  Group G(GroupSpec::zd(2));
  try {
    G.parse("a q");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Group, ProductNamesAreDisambiguated) {
  Group G(GroupSpec::direct_product(GroupSpec::free(2), GroupSpec::zd(1)));
  EXPECT_EQ(G.num_gens(), 3);
  EXPECT_EQ(G.letter_name(0), "a0");
  EXPECT_EQ(G.letter_name(5), "A2");
  const Element g = G.parse("a0 a2 b1 A2");
  EXPECT_EQ(G.format(g), "a0 b1");
}

TEST(GroupProperty, ZdAgreesWithVectorModel) {
  gen::Rng rng(11);
  for (int d = 1; d <= 4; ++d) {
    Group G(GroupSpec::zd(d));
    for (int i = 0; i < 250; ++i) {
      auto u = gen::word(rng, G, 10);
      auto v = gen::word(rng, G, 10);
      auto uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      const Element e = G.mul(G.from_letters(u), G.from_letters(v));
      EXPECT_EQ(e, G.from_letters(uv));
      EXPECT_EQ(zd_vector(d, e.letters()), zd_vector(d, uv));
    }
  }
}

TEST(GroupProperty, FreeAgreesWithStackReduction) {
  gen::Rng rng(12);
  Group G(GroupSpec::free(3));
  for (int i = 0; i < 1000; ++i) {
    auto u = gen::word(rng, G, 12);
    auto v = gen::word(rng, G, 12);
    auto uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const Element e = G.mul(G.from_letters(u), G.from_letters(v));
    EXPECT_EQ(e.letters(), free_reduce(uv));
  }
}

TEST(GroupProperty, Bs12AgreesWithAffineModel) {
  gen::Rng rng(13);
  Group G(GroupSpec::bs(1, 2));
  for (int i = 0; i < 1000; ++i) {
    auto u = gen::word(rng, G, 10);
    auto v = gen::word(rng, G, 10);
    const Element eu = G.from_letters(u);
    const Element ev = G.from_letters(v);
    EXPECT_EQ(bs12_affine(eu.letters()), bs12_affine(u));
    EXPECT_EQ(eu == ev, bs12_affine(u) == bs12_affine(v));
    auto uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    EXPECT_EQ(G.mul(eu, ev), G.from_letters(uv));
  }
}

TEST(GroupProperty, Bs12ShortWordsCollapseOnlyWhenAffineEqual) {
  // Exhaustive over words of length <= 6: equal normal forms iff equal maps.
  Group G(GroupSpec::bs(1, 2));
  std::map<std::pair<std::int64_t, std::int64_t>, Element> seen;
  std::vector<std::vector<Letter>> frontier{{}};
  for (int len = 0; len <= 6; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : frontier) {
      const Affine a = bs12_affine(w);
      const Element e = G.from_letters(w);
      auto [it, fresh] = seen.emplace(std::make_pair(a.scale_exp, a.shift), e);
      if (!fresh) {
        EXPECT_EQ(it->second, e);
      }
      if (len < 6)
        for (Letter l = 0; l < 4; ++l) {
          auto w2 = w;
          w2.push_back(l);
          next.push_back(std::move(w2));
        }
    }
    frontier = std::move(next);
  }
}

TEST(GroupProperty, GeneralBsGroupAxioms) {
  gen::Rng rng(14);
  for (auto [m, n] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 2}, std::pair{1, 1}}) {
    Group G(GroupSpec::bs(m, n));
    const Element rel = G.from_letters(G.relators()[0]);
    EXPECT_TRUE(rel.is_identity()) << m << "," << n;
    for (int i = 0; i < 300; ++i) {
      const Element a = gen::element(rng, G, 8);
      const Element b = gen::element(rng, G, 8);
      const Element c = gen::element(rng, G, 8);
      EXPECT_EQ(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)));
      EXPECT_TRUE(G.mul(a, G.inv(a)).is_identity());
      EXPECT_EQ(G.normalize(a.syllables()), a);
      // Inserting the relator anywhere leaves the element unchanged.
      auto w = a.letters();
      const auto pos = static_cast<std::ptrdiff_t>(rng() % (w.size() + 1));
      auto r = G.relators()[0];
      w.insert(w.begin() + pos, r.begin(), r.end());
      EXPECT_EQ(G.from_letters(w), a);
    }
  }
}

TEST(GroupProperty, BsNormalFormHasNoPinch) {
  // An x-power in front of t must lie in [1, m), in front of T in [1, n).
  gen::Rng rng(15);
  const int m = 2, n = 3;
  Group G(GroupSpec::bs(m, n));
  for (int i = 0; i < 500; ++i) {
    const Element e = gen::element(rng, G, 12);
    const auto& syl = e.syllables();
    for (std::size_t k = 0; k < syl.size(); ++k) {
      if (syl[k].gen != 0 || k + 1 == syl.size()) continue;
      const int bound = syl[k + 1].exp > 0 ? m : n;
      EXPECT_GT(syl[k].exp, 0);
      EXPECT_LT(syl[k].exp, bound);
    }
  }
}

TEST(GroupProperty, CyclicMatchesModularArithmetic) {
  gen::Rng rng(16);
  Group G(GroupSpec::cyclic(5));
  for (int i = 0; i < 200; ++i) {
    auto w = gen::word(rng, G, 20);
    std::int64_t e = 0;
    for (Letter l : w) e += is_inverse_letter(l) ? -1 : 1;
    e = ((e % 5) + 5) % 5;
    EXPECT_EQ(static_cast<std::int64_t>(G.from_letters(w).letters().size()), e);
  }
}

TEST(GroupProperty, FormatParseRoundTrip) {
  gen::Rng rng(17);
  for (const auto& spec : {GroupSpec::zd(3, {0}), GroupSpec::free(2), GroupSpec::bs(2, 3),
                           GroupSpec::direct_product(GroupSpec::bs(1, 2), GroupSpec::zd(2))}) {
    Group G(spec);
    for (int i = 0; i < 100; ++i) {
      const Element e = gen::element(rng, G, 10);
      EXPECT_EQ(G.parse(G.format(e)), e);
    }
  }
}

TEST(WordBall, SizesMatchCounting) {
  EXPECT_EQ(word_ball(Group(GroupSpec::zd(2)), 3).size(), 25u);  // 2r^2 + 2r + 1
  EXPECT_EQ(word_ball(Group(GroupSpec::free(2)), 3).size(), 53u);  // 1 + 4 + 12 + 36
  auto ball = word_ball(Group(GroupSpec::zd(2)), 2);
  for (std::size_t i = 1; i < ball.size(); ++i) EXPECT_LE(ball[i - 1].length, ball[i].length);
}
