#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ineqlab/bounds.hpp"
#include "ineqlab/lemmas.hpp"
#include "oracle.hpp"

namespace {

using namespace ineqlab;

const double kSqrt6 = std::sqrt(6.0);
const double kCbrt2 = std::cbrt(2.0);

// Frozen from a 30-digit evaluation of C(p,q,delta) with a 20000-point scan
// and Newton refinement of dC/d(delta) = 0.
constexpr double kC66At23Over24 = 4.16875862030525575719;
constexpr double kC66Min = 4.16777430589672037540;
constexpr double kC66ArgMin = 0.94995441384656860182;
constexpr double kKBase2807 = 1.37649038504889877047;   // 2.8^(lo), lo = 9/29
constexpr double kComposite2_05_12 = 1.50165428891829874128;

TEST(Bennett, Examples) {
  EXPECT_EQ(bennett_bound({1, 2, 2}).value, 4.0);
  EXPECT_EQ(bennett_bound({1, 2, 2}).rule, Rule::Bennett);
  EXPECT_DOUBLE_EQ(bennett_bound({2, 1, 1}).value, 1.5);
  for (double q : {0.5, 1.0, 2.0, 10.0}) EXPECT_EQ(bennett_bound({1, q, 1}).value, 1.0);
  EXPECT_THROW(bennett_bound({0.5, 1, 1}), DomainError);
}

TEST(CDelta, Examples) {
  EXPECT_NEAR(c_delta(6, 6, 1), 4.2, 1e-14);
  EXPECT_NEAR(c_delta(6, 6, 5.0 / 6.0), std::pow(6.0, 5.0 / 6.0), 1e-13);
  EXPECT_NEAR(c_delta(6, 6, 23.0 / 24.0), kC66At23Over24, 1e-13);
  EXPECT_LT(c_delta(6, 6, 23.0 / 24.0), 4.2);
}

TEST(CDelta, Errors) {
  EXPECT_THROW(c_delta(1, 2, 0.5), SingularityError);
  EXPECT_THROW(c_delta(0.9, 2, 0.5), SingularityError);
  EXPECT_THROW(c_delta(6, 6, 0.5), DomainError);   // below lo = 5/6
  EXPECT_THROW(c_delta(6, 6, 1.01), DomainError);
}

TEST(CDelta, EndpointIdentities) {
  for (double p : {1.5, 2.0, 6.0, 10.0}) {
    for (double q : {0.5, 1.0, 3.0, 6.0}) {
      const auto iv = DeltaInterval::for_params(p, q);
      EXPECT_LE(iv.lo, iv.hi);
      const double third = (1 + (p - 1) * q / (p + q)) * (1 + p / (q * (p - 1)));
      EXPECT_LE(relative_difference(c_delta(p, q, iv.lo), std::pow(p, iv.lo)), 1e-10);
      EXPECT_LE(relative_difference(c_delta(p, q, 1.0), third), 1e-10);
    }
  }
}

TEST(MinimizeCDelta, InteriorMinimumAt66) {
  const auto m = minimize_c_delta(6, 6);
  EXPECT_LT(m.c_star, 4.2);
  EXPECT_GT(m.delta_star, m.interval.lo);
  EXPECT_LT(m.delta_star, m.interval.hi);
  EXPECT_NEAR(m.c_star, kC66Min, 1e-12);
  EXPECT_NEAR(m.delta_star, kC66ArgMin, 1e-5);  // C is flat near its minimum
}

TEST(MinimizeCDelta, EndpointMinima) {
  auto m = minimize_c_delta(1.5, 3);
  EXPECT_DOUBLE_EQ(m.interval.lo, 0.5);
  EXPECT_DOUBLE_EQ(m.delta_star, 0.5);
  EXPECT_NEAR(m.c_star, std::sqrt(1.5), 1e-14);

  m = minimize_c_delta(2, 1);
  EXPECT_LE(m.c_star, kCbrt2 + 1e-15);
  EXPECT_NEAR(m.delta_star, 1.0 / 3.0, 1e-15);
}

TEST(MinimizeCDelta, NeverWorseThanDenseScan) {
  for (double p : {1.2, 1.5, 2.0, 3.0, 6.0, 10.0}) {
    for (double q : {0.5, 1.0, 2.0, 6.0, 10.0}) {
      const auto m = minimize_c_delta(p, q);
      const auto iv = m.interval;
      double scan = INFINITY;
      for (int i = 0; i <= 4000; ++i) {
        scan = std::min(scan, c_delta(p, q, iv.lo + (iv.hi - iv.lo) * i / 4000.0));
      }
      EXPECT_LE(m.c_star, scan + 1e-12) << p << "," << q;
      EXPECT_LE(m.c_star, c_delta(p, q, iv.lo));
      EXPECT_LE(m.c_star, c_delta(p, q, iv.hi));
    }
  }
  EXPECT_THROW(minimize_c_delta(1, 1), SingularityError);
}

TEST(KR1, ExactOneAtP1) {
  for (double q : {0.5, 1.0, 2.0, 10.0}) {
    const auto b = k_r1_bound(1, q);
    EXPECT_EQ(b.value, 1.0);
    EXPECT_EQ(b.rule, Rule::ExactOne);
  }
  EXPECT_THROW(k_r1_bound(0.9, 1), DomainError);
  EXPECT_THROW(k_r1_bound(2, 0), DomainError);
}

TEST(KR1, Examples) {
  const auto b66 = k_r1_bound(6, 6);
  EXPECT_LT(b66.value, 4.2);
  EXPECT_EQ(b66.rule, Rule::DeltaMin);
  EXPECT_NEAR(k_r1_bound(1.5, 3).value, 1.224744871391589, 1e-14);
  EXPECT_NEAR(2.0 * k_r1_bound(1.5, 3).value, kSqrt6, 1e-14);
}

TEST(ThreeTerm, Examples) {
  auto b = three_term_bound(6, 6);
  EXPECT_NEAR(b.value, 4.2, 1e-12);
  EXPECT_EQ(b.detail.at("winning_term"), 3);

  b = three_term_bound(2, 1);
  EXPECT_NEAR(b.value, kCbrt2, 1e-12);
  EXPECT_EQ(b.detail.at("winning_term"), 2);

  b = three_term_bound(1.5, 3);
  EXPECT_DOUBLE_EQ(b.detail.at("term1"), 2.0);
  EXPECT_DOUBLE_EQ(b.detail.at("term2"), std::sqrt(1.5));
  EXPECT_DOUBLE_EQ(b.detail.at("term3"), 8.0 / 3.0);
  EXPECT_EQ(b.detail.at("winning_term"), 2);

  EXPECT_EQ(three_term_bound(1, 3).value, 1.0);
}

TEST(ThreeTerm, FirstTermWinsForLargeP) {
  // q fixed, p growing: the Bennett term tends to q+1 while the others grow.
  const auto b = three_term_bound(1000, 1);
  EXPECT_EQ(b.detail.at("winning_term"), 1);
}

TEST(ThreeTerm, NeverBelowDeltaMinimum) {
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, 10.0}) {
    for (double q : {0.5, 1.0, 2.0, 6.0, 10.0}) {
      EXPECT_GE(three_term_bound(p, q).value, k_r1_bound(p, q).value - 1e-12);
    }
  }
}

TEST(ReductionExponents, Examples) {
  auto e = reduction_exponents(1, 2, 2);
  EXPECT_EQ(e.e1, 0.0);
  EXPECT_EQ(e.e2, 1.0);
  e = reduction_exponents(2, 2, 1);
  EXPECT_EQ(e.e1, 1.0);
  EXPECT_EQ(e.e2, 0.0);
  e = reduction_exponents(2, 2, 2);
  EXPECT_DOUBLE_EQ(e.e1, 0.5);
  EXPECT_DOUBLE_EQ(e.e2, 0.5);
  EXPECT_THROW(reduction_exponents(1, 2, 1), DegenerateInputError);
}

TEST(ReductionExponents, PartitionOfUnity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = 1.0 + u(rng), q = 0.01 + u(rng), r = 1.0 + u(rng);
    const auto e = reduction_exponents(p, q, r);
    EXPECT_NEAR(e.e1 + e.e2, 1.0, 1e-14);
    EXPECT_GE(e.e1, 0.0);
    EXPECT_GE(e.e2, 0.0);
  }
}

TEST(CaseP1, Examples) {
  EXPECT_NEAR(case_p1_bound(2, 2, std::sqrt(1.5)), kSqrt6, 1e-14);
  for (double q : {0.5, 2.0, 7.0}) EXPECT_EQ(case_p1_bound(q, 1, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(case_p1_bound(1, 3, 1.7), 9.0 * 1.7);
  EXPECT_DOUBLE_EQ(case_p1_bound(1, 2, 1.3), 2.0 * 1.3);  // both branches meet at r = 2
  EXPECT_THROW(case_p1_bound(1, 0.5, 1.0), DomainError);
}

TEST(Composite, Littlewood) {
  const auto b = composite_bound({1, 2, 2});
  EXPECT_LE(relative_difference(b.value, kSqrt6), 1e-9);
  EXPECT_LE(b.value, kSqrt6 + 1e-12);
  // q+r-q/p = 2: both regime formulas are evaluated.
  EXPECT_TRUE(b.detail.contains("regime_a"));
  EXPECT_TRUE(b.detail.contains("regime_b"));
  ASSERT_EQ(b.children.size(), 1u);
  EXPECT_NEAR(b.children[0].value, std::sqrt(1.5), 1e-14);
}

TEST(Composite, CollapsesAtROne) {
  for (double p : {1.5, 2.0, 6.0}) {
    for (double q : {0.5, 1.0, 6.0}) {
      EXPECT_DOUBLE_EQ(composite_bound({p, q, 1}).value, k_r1_bound(p, q).value);
    }
  }
}

TEST(Composite, RegimeBExample) {
  const auto b = composite_bound({2, 0.5, 1.2});
  EXPECT_EQ(b.rule, Rule::CompositeRegimeB);
  EXPECT_FALSE(b.detail.contains("regime_a"));
  EXPECT_NEAR(b.detail.at("indicator"), 1.45, 1e-15);
  EXPECT_NEAR(b.detail.at("e2"), 2 * 0.2 / (1 + 0.4 - 0.5), 1e-15);
  EXPECT_NEAR(b.detail.at("k_base"), kKBase2807, 1e-13);
  EXPECT_NEAR(b.value, kComposite2_05_12, 1e-13);
}

TEST(Composite, Errors) {
  EXPECT_THROW(composite_bound({1, 2, 1}), DegenerateInputError);
  EXPECT_THROW(composite_bound({2, 2, 0.5}), DomainError);
}

TEST(ReductionSmallR, Examples) {
  for (double p : {1.5, 3.0}) EXPECT_DOUBLE_EQ(reduction_small_r({p, 2, 1}).value, k_r1_bound(p, 2).value);
  const auto b = reduction_small_r({2, 2, 0.5});
  EXPECT_NEAR(b.value, std::pow(1.5, 1.0 / 6.0), 1e-13);
  EXPECT_LE(b.value, 1.0700);
  EXPECT_THROW(reduction_small_r({1, 2, 0.5}), DomainError);
  EXPECT_THROW(reduction_small_r({2, 2, 1.5}), DomainError);
}

TEST(BestBound, Examples) {
  auto b = best_bound({1, 2, 2});
  EXPECT_LE(relative_difference(b.value, kSqrt6), 1e-9);
  EXPECT_EQ(b.detail.at("candidate.Bennett"), 4.0);
  for (double q : {0.5, 1.0, 2.0, 5.0}) {
    b = best_bound({1, q, 1});
    EXPECT_EQ(b.value, 1.0);
    EXPECT_EQ(b.rule, Rule::ExactOne);
  }
  b = best_bound({6, 6, 1});
  EXPECT_LT(b.value, 4.2);
  EXPECT_EQ(b.rule, Rule::DeltaMin);
}

TEST(BestBound, RefinesBennettOnGridAndStaysAboveOne) {
  BoundEngine engine;
  for (const auto& pr : reference_grid()) {
    const double bennett = bennett_bound(pr).value;
    const auto best = engine.best_bound(pr);
    EXPECT_GE(best.value, 1.0);
    EXPECT_LE(best.value, bennett + 1e-9);
    if (!(pr.p == 1.0 && pr.r == 1.0)) {
      EXPECT_LE(engine.composite_bound(pr).value, bennett + 1e-9);
    }
  }
  EXPECT_GT(engine.cache_size(), 0u);
}

TEST(BestBound, SmallRRegion) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BoundEngine engine;
  for (int i = 0; i < 300; ++i) {
    const double p = 1.0 + 9.0 * u(rng), q = 0.1 + 5.0 * u(rng), r = 0.05 + 0.95 * u(rng);
    if (!ParamTriple::violation(p, q, r).empty()) continue;
    const auto b = engine.best_bound({p, q, r});
    EXPECT_GE(b.value, 1.0 - 1e-12);
    EXPECT_LE(b.value, bennett_bound({p, q, r}).value + 1e-12);
  }
}

TEST(BestBound, DominatesRandomRatios) {
  std::mt19937_64 rng(41);
  BoundEngine engine;
  const auto grid = reference_grid();
  for (int trial = 0; trial < 500; ++trial) {
    const auto& pr = grid[trial % grid.size()];
    auto v = oracle::random_positive(rng, 1 + trial % 32, 1e-2, 1.0);
    const double ratio = evaluate_main(Sequence(v), pr).ratio;
    EXPECT_LE(ratio, engine.best_bound(pr).value * (1 + 1e-9));
  }
}

}  // namespace
