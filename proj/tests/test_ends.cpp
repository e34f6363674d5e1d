#include <gtest/gtest.h>

#include "lattice_oracle.hpp"
#include "relend/ends.hpp"

using namespace relend;

namespace {

int touching(const std::vector<Component>& cs) {
  return static_cast<int>(std::count_if(cs.begin(), cs.end(), [](const Component& c) { return c.touches_sphere; }));
}

}  // namespace

TEST(Ends, LineHasTwoRays) {
  CosetGraph g(Group(GroupSpec::zd(1)), 6);
  const auto cs = components_outside_ball(g, 2, 6);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_TRUE(cs[0].touches_sphere && cs[1].touches_sphere);
}

TEST(Ends, GridComplementConnected) {
  CosetGraph g(Group(GroupSpec::zd(2)), 8);
  EXPECT_EQ(touching(components_outside_ball(g, 2, 8)), 1);
}

TEST(Ends, FreeGroupBranches) {
  CosetGraph g(Group(GroupSpec::free(2)), 6);
  EXPECT_EQ(touching(components_outside_ball(g, 1, 4)), 4);
  EXPECT_EQ(touching(components_outside_ball(g, 2, 5)), 12);
  EXPECT_EQ(touching(components_outside_ball(g, 3, 6)), 36);
}

TEST(Ends, ShellMatchesLatticeFloodFill) {
  for (int d : {1, 2, 3}) {
    CosetGraph g(Group(GroupSpec::zd(d)), 7);
    for (int r = 1; r <= 3; ++r) {
      for (int R = r + 1; R <= 7; ++R) {
        const auto cs = components_outside_ball(g, r, R);
        const auto o = oracle::shell(d, r, R);
        EXPECT_EQ(static_cast<int>(cs.size()), o.components) << d << " " << r << " " << R;
        EXPECT_EQ(touching(cs), o.touching);
      }
    }
  }
}

TEST(Ends, EstimateExamples) {
  EXPECT_EQ(estimate_ends(Group(GroupSpec::zd(2)), 5, 5).estimate.str(), "exact 1");
  EXPECT_EQ(estimate_ends(Group(GroupSpec::zd(3, {0})), 5, 5).estimate.str(), "exact 1");
  EXPECT_EQ(estimate_ends(Group(GroupSpec::zd(1)), 5, 5).estimate.str(), "exact 2");
  EXPECT_EQ(estimate_ends(Group(GroupSpec::zd(2, {0})), 5, 5).estimate.str(), "exact 2");
  EXPECT_EQ(estimate_ends(Group(GroupSpec::bs(1, 2)), 3, 3).estimate.kind, EndsEstimate::Kind::AtLeast);
  const auto f = estimate_ends(Group(GroupSpec::free(2)), 3, 3);
  EXPECT_EQ(f.estimate.str(), ">= 36");
  ASSERT_EQ(f.rows.size(), 3u);
  EXPECT_EQ(f.rows[0].sphere_touching, 4);
  EXPECT_EQ(f.rows[1].sphere_touching, 12);
  EXPECT_EQ(f.rows[2].sphere_touching, 36);
}

TEST(Ends, EstimateRejectsSmallMargin) {
  EXPECT_THROW(estimate_ends(Group(GroupSpec::zd(2)), 3, 1), Error);
}

TEST(Ends, ClassifyRows) {
  auto row = [](int k, bool st) {
    EndsRow r;
    r.sphere_touching = k;
    r.stabilized = st;
    return r;
  };
  EXPECT_EQ(classify_rows({row(2, true), row(1, true), row(1, true)}).str(), "exact 1");
  EXPECT_EQ(classify_rows({row(1, true), row(1, false)}).str(), "inconclusive");
  EXPECT_EQ(classify_rows({row(1, true), row(3, true), row(2, true)}).str(), "inconclusive");
  EXPECT_EQ(classify_rows({row(2, true), row(3, true), row(5, true)}).str(), ">= 5");
}

TEST(Capacity, GridMatchesOracle) {
  CosetGraph g(Group(GroupSpec::zd(2)), 16);
  for (int r = 0; r <= 5; ++r) {
    const auto c = capacity(g, r, r + 10);
    EXPECT_EQ(c.N, r);
    EXPECT_EQ(oracle::shell(2, r + 1, c.R).max_norm_off_unbounded, c.N);
  }
  CosetGraph h(Group(GroupSpec::zd(3, {0})), 14);
  for (int r = 0; r <= 4; ++r) EXPECT_EQ(capacity(h, r, r + 10).N, r);
}

TEST(Capacity, Errors) {
  CosetGraph line(Group(GroupSpec::zd(1)), 12);
  try {
    capacity(line, 2, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOneEnded);
  }
  CosetGraph grid(Group(GroupSpec::zd(2)), 4);
  try {
    // Only R = 3 yields a single unbounded component, so there is nothing to confirm against.
    capacity(grid, 1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoStabilization);
  }
  EXPECT_THROW(capacity(grid, 1, 9), Error);
}

TEST(Capacity, MonotoneAndAtLeastR) {
  for (const auto& spec : {GroupSpec::zd(3), GroupSpec::direct_product(GroupSpec::zd(1), GroupSpec::zd(1))}) {
    Group G(spec);
    int prev = 0;
    for (int r = 0; r <= 3; ++r) {
      const int N = capacity(G, r).N;
      EXPECT_GE(N, r);
      EXPECT_GE(N, prev);
      prev = N;
    }
  }
}

TEST(EndsProperty, TouchingComponentsOnlyMerge) {
  // Every sphere-touching component at R+1 contains a whole sphere-touching
  // component at R, so the count can only drop or stay.
  for (const auto& spec : {GroupSpec::zd(2), GroupSpec::zd(1), GroupSpec::zd(3, {0}), GroupSpec::bs(1, 2)}) {
    CosetGraph g(Group(spec), 8);
    for (int r = 1; r <= 3; ++r) {
      for (int R = r + 2; R < 8; ++R) {
        const int a = touching(components_outside_ball(g, r, R));
        const int b = touching(components_outside_ball(g, r, R + 1));
        EXPECT_LE(b, a);
      }
    }
  }
}

TEST(EndsProperty, OneEndedNeverExceedsOneAfterStabilizing) {
  for (const auto& spec : {GroupSpec::zd(2), GroupSpec::zd(3, {0})}) {
    const auto rep = estimate_ends(Group(spec), 5, 5);
    for (const auto& row : rep.rows)
      if (row.stabilized) {
        EXPECT_LE(row.sphere_touching, 1);
      }
  }
}

TEST(QuotientCheck, AgreesOnBuiltIns) {
  const auto a = cross_check_quotient(GroupSpec::zd(3, {0}), 5, 5);
  EXPECT_TRUE(a.agree);
  EXPECT_EQ(a.coset.estimate.str(), "exact 1");
  const auto b = cross_check_quotient(GroupSpec::zd(2, {0}), 5, 5);
  EXPECT_TRUE(b.agree);
  EXPECT_EQ(b.quotient.estimate.str(), "exact 2");
  const auto c = cross_check_quotient(GroupSpec::free(2), 3, 3);
  EXPECT_TRUE(c.agree);
  EXPECT_EQ(c.coset.estimate.kind, EndsEstimate::Kind::AtLeast);
  try {
    cross_check_quotient(GroupSpec::bs(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFamily);
  }
}
