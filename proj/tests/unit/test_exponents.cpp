#include <cmath>

#include <gtest/gtest.h>

#include "nlstrain/error.hpp"
#include "nlstrain/exponents.hpp"
#include "nlstrain/nonlinearity.hpp"

using namespace nlstrain;

namespace {

// Independent restatement of the three r0 inequalities.
bool oracle_holds(int d, double a1, double a2, double r0) {
  const double r2 = 2.0 + a2;
  const bool range = std::max(1.0, d * a1 / 2.0) < r0 && r0 < 2.0 + a1;
  const bool holder = 0.5 <= a1 / r0 + 1.0 / r2;
  const bool interp = 1.0 < (a1 + 1.0) / r0 + 1.0 / r2;
  return range && holder && interp;
}

bool is_dyadic(double eps) {
  for (int k = 4; k < 60; ++k) {
    if (eps == std::ldexp(1.0, -k)) return true;
  }
  return false;
}

}  // namespace

TEST(ChooseR0, OneDimensionalCubicQuintic) {
  const double r0 = choose_r0(1, 2.0, 4.0);
  EXPECT_GT(r0, 1.0);
  EXPECT_LE(r0, 1.0 + 1.0 / 16.0);
  EXPECT_TRUE(is_dyadic(r0 - 1.0));
}

TEST(ChooseR0, StaysBelowTwoForSmallAlpha) {
  const double r0 = choose_r0(1, 1.0, 2.0);
  EXPECT_LE(r0, 2.0);
  EXPECT_TRUE(oracle_holds(1, 1.0, 2.0, r0));
}

TEST(ChooseR0, ThreeDimensional) {
  const double r0 = choose_r0(3, 3.0, 3.5);
  EXPECT_GT(r0, 4.5);
  EXPECT_LE(r0, 4.5 + 1.0 / 16.0);
  EXPECT_GE(3.0 / r0 + 1.0 / 5.5, 0.5);
  EXPECT_GT(4.0 / r0 + 1.0 / 5.5, 1.0);
  EXPECT_NEAR(3.0 / 4.5 + 1.0 / 5.5, 0.848, 1e-3);
}

TEST(ChooseR0, SweepSatisfiesEveryInequality) {
  int checked = 0;
  for (int d = 1; d <= 3; ++d) {
    const double amax = std::min(alpha_max(d), 6.0);
    for (int i = 1; i <= 12; ++i) {
      const double a1 = amax * i / 13.0;
      for (int j = i; j <= 12; ++j) {
        const double a2 = amax * j / 13.0;
        if (a2 / (2.0 + a2) > a1) {
          EXPECT_THROW(choose_r0(d, a1, a2), Error);
          continue;
        }
        double r0 = 0.0;
        try {
          r0 = choose_r0(d, a1, a2);
        } catch (const Error& e) {
          ADD_FAILURE() << "d=" << d << " a1=" << a1 << " a2=" << a2 << ": " << e.what();
          continue;
        }
        EXPECT_TRUE(oracle_holds(d, a1, a2, r0)) << d << " " << a1 << " " << a2 << " " << r0;
        EXPECT_TRUE(is_dyadic(r0 - std::max(1.0, d * a1 / 2.0)));
        if (a1 < 4.0 / d) {
          EXPECT_LE(r0, 2.0);
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(ChooseR0, ViolatedPairCondition) {
  try {
    choose_r0(1, 0.1, 4.0);
    FAIL() << "expected ConditionViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConditionViolated);
  }
}

TEST(ExponentConfig, DerivedQuantities) {
  const auto cfg = make_exponent_config(1, 2.0, 4.0);
  EXPECT_DOUBLE_EQ(cfg.r2, 6.0);
  EXPECT_NEAR(cfg.theta, 0.5 - 1.0 / 6.0, 1e-15);
  EXPECT_GT(cfg.theta, 0.0);
  EXPECT_LT(cfg.theta, 1.0);
  EXPECT_GT(cfg.s, 1.0);
  const double r2c = 6.0 / 5.0;
  EXPECT_GT(1.0 / cfg.s, 1.0 / r2c);
  EXPECT_LT(1.0 / cfg.s, (1.0 + cfg.alpha1) / cfg.r0);
  EXPECT_DOUBLE_EQ(cfg.epsilon, cfg.r0 - 1.0);
}

TEST(ExponentConfig, Conjugate) {
  EXPECT_DOUBLE_EQ(conjugate(2.0), 2.0);
  EXPECT_DOUBLE_EQ(conjugate(6.0), 1.2);
}

TEST(TheoremConditions, KinkHolderCasePasses) {
  const auto cfg = exponent_config_with_r0(1, 1.0, 2.0, 1.0, 1.0);
  const auto report = check_theorem_conditions(cfg, Theorem::T1_3);
  EXPECT_TRUE(report.pass()) << report.first_failure();
  EXPECT_TRUE(report.first_failure().empty());
}

TEST(TheoremConditions, SmallAlphaPasses) {
  const auto cfg = make_exponent_config(1, 1.0, 1.0);
  EXPECT_TRUE(check_theorem_conditions(cfg, Theorem::T1_2).pass());
}

TEST(TheoremConditions, KinkR0ConditionFails) {
  const auto cfg = exponent_config_with_r0(1, 1.0, 2.0, 2.0, 0.0);
  const auto report = check_theorem_conditions(cfg, Theorem::T1_4);
  EXPECT_FALSE(report.pass());
  bool found = false;
  for (const auto& c : report.conditions) {
    if (c.lhs == 4.0 && c.rhs == 3.0) {
      found = true;
      EXPECT_FALSE(c.holds);
    }
  }
  EXPECT_TRUE(found);
}

TEST(TheoremConditions, ReportsDoNotThrow) {
  const auto cfg = exponent_config_with_r0(1, 0.1, 4.0, 1.5);
  for (Theorem t : {Theorem::T1_1, Theorem::T1_2, Theorem::T1_3, Theorem::T1_4}) {
    EXPECT_NO_THROW(check_theorem_conditions(cfg, t));
  }
  EXPECT_FALSE(check_theorem_conditions(cfg, Theorem::T1_1).pass());
}

TEST(AdmissiblePairs, OneDimensional) {
  const auto pairs = admissible_pairs(1, strichartz_r_cap(1, 4.0));
  bool has_energy = false;
  bool has_endpoint = false;
  for (const auto& p : pairs) {
    const double lhs = (std::isinf(p.q) ? 0.0 : 2.0 / p.q) + (std::isinf(p.r) ? 0.0 : 1.0 / p.r);
    EXPECT_NEAR(lhs, 0.5, 1e-15);
    has_energy = has_energy || (std::isinf(p.q) && p.r == 2.0);
    has_endpoint = has_endpoint || (p.q == 4.0 && std::isinf(p.r));
  }
  EXPECT_TRUE(has_energy);
  EXPECT_TRUE(has_endpoint);
}

TEST(AdmissiblePairs, EnergyPairAlwaysAdmissible) {
  for (int d = 1; d <= 4; ++d) EXPECT_NO_THROW(validate_pair(d, {kInfinity, 2.0}));
}

TEST(AdmissiblePairs, ForbiddenEndpointInTwoDimensions) {
  try {
    validate_pair(2, {2.0, kInfinity});
    FAIL() << "expected InvalidPair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPair);
  }
  EXPECT_THROW(validate_pair(1, {4.0, 4.0}), Error);
  EXPECT_DOUBLE_EQ(strichartz_r_cap(2, 2.0), 5.0);
}

TEST(AdmissiblePairs, PairForR) {
  const auto p = pair_for_r(3, 3.0);
  EXPECT_NEAR(2.0 / p.q + 3.0 / p.r, 1.5, 1e-15);
  EXPECT_NO_THROW(validate_pair(3, p));
}
