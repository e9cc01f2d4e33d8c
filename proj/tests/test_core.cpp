#include <gtest/gtest.h>

#include <cmath>

#include "mafia_odds/core.hpp"

using namespace mafia;

TEST(Classify, PaperBoundaryExamples) {
  const auto classic = RoundStructure::classic();
  EXPECT_EQ(classify({5, 0}, classic).kind, Outcome::civilians_win);
  EXPECT_EQ(classify({5, 0}, classic).halves(), 0);
  EXPECT_EQ(classify({1, 3}, classic).kind, Outcome::mafia_wins);
  EXPECT_EQ(classify({1, 3}, classic).value(Backend::exact).exact(), 1);
  EXPECT_EQ(classify({1, 1}, classic).kind, Outcome::tie_base);
  EXPECT_EQ(classify({1, 1}, classic).value(Backend::exact).exact(), mpq_class(1, 2));
  EXPECT_EQ(classify({-1, 0}, RoundStructure(3, 1)).kind, Outcome::civilians_win);
  EXPECT_EQ(classify({4, 2}, classic).kind, Outcome::interior);
}

TEST(Classify, ExtinctMafiaBeatsCivilianDeficit) {
  for (const RoundStructure rs : {RoundStructure(2, 1), RoundStructure(3, 1), RoundStructure(5, 2)})
    for (std::int64_t n = -6; n <= 6; ++n)
      for (std::int64_t m = -3; m <= 0; ++m) EXPECT_EQ(classify({n, m}, rs).kind, Outcome::civilians_win) << n << "," << m;
}

TEST(Classify, InteriorExactlyWhenCiviliansHoldMajority) {
  for (const RoundStructure rs : {RoundStructure(2, 1), RoundStructure(4, 3)}) {
    for (std::int64_t m = 1; m <= 20; ++m) {
      for (std::int64_t n = m; n <= 40; ++n) {
        const bool tie = rs.is_classic() && n == 1 && m == 1;
        EXPECT_EQ(classify({n, m}, rs).kind, tie ? Outcome::tie_base : Outcome::interior);
      }
    }
  }
  // Generalized games resolve (1,1) through the recursion.
  EXPECT_EQ(classify({1, 1}, RoundStructure(3, 1)).kind, Outcome::interior);
}

TEST(Classify, IsPure) {
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(classify({7, 3}, RoundStructure(3, 2)).kind, Outcome::interior);
    EXPECT_EQ(classify({2, 3}, RoundStructure(3, 2)).kind, Outcome::mafia_wins);
  }
}

TEST(Classify, TieBaseAgreesWithOneStepOfTheRecursion) {
  // (1,1): 1/2 * W(-1,1) + 1/2 * W(0,0)
  const auto classic = RoundStructure::classic();
  const mpq_class civ = classify({-1, 1}, classic).value(Backend::exact).exact();
  const mpq_class maf = classify({0, 0}, classic).value(Backend::exact).exact();
  EXPECT_EQ(civ, 1);
  EXPECT_EQ(maf, 0);
  EXPECT_EQ(mpq_class(civ / 2 + maf / 2), classify({1, 1}, classic).value(Backend::exact).exact());
}

TEST(Classify, InteriorHasNoBoundaryValue) {
  EXPECT_THROW(classify({4, 2}, RoundStructure::classic()).halves(), error);
}

TEST(RoundStructure, Validation) {
  EXPECT_NO_THROW(RoundStructure(2, 1));
  EXPECT_NO_THROW(RoundStructure(5, 4));
  for (auto [r, d] : {std::pair{2, 2}, {3, 0}, {1, 1}, {3, 4}, {2, -1}}) {
    try {
      RoundStructure rs(r, d);
      ADD_FAILURE() << "accepted r=" << r << " d=" << d;
    } catch (const error& e) {
      EXPECT_EQ(e.kind(), error_kind::invalid_rounds);
    }
  }
  EXPECT_DOUBLE_EQ(RoundStructure(3, 1).alpha(), 1.0 / 3.0);
  EXPECT_TRUE(RoundStructure::classic().is_classic());
}

TEST(GameState, UserStateValidation) {
  EXPECT_THROW(require_user_state({0, 0}), error);
  EXPECT_THROW(require_user_state({-1, 2}), error);
  EXPECT_THROW(require_user_state({2, -1}), error);
  EXPECT_NO_THROW(require_user_state({0, 1}));
  EXPECT_NO_THROW(require_user_state({1, 0}));
}

TEST(ProbValue, ExactToFloatIsAccurate) {
  for (long den : {3L, 7L, 15L, 1001L, 65537L}) {
    for (long num = 1; num < den; num += den / 3 + 1) {
      const ProbValue p(mpq_class(num, den));
      const double expect = static_cast<double>(num) / static_cast<double>(den);
      EXPECT_LE(std::fabs(p.to_double() - expect), std::ldexp(expect, -50));
    }
  }
  EXPECT_EQ(ProbValue(mpq_class(2, 4)).to_string(), "1/2");
  EXPECT_EQ(make_prob(Backend::floating, 1, 4).to_double(), 0.25);
  EXPECT_FALSE(make_prob(Backend::floating, 1, 4).is_exact());
}
