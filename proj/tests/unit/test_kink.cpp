#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nlstrain/error.hpp"
#include "nlstrain/kink.hpp"

using namespace nlstrain;

TEST(KinkParams, CubicQuarticPlateau) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const auto p = find_kink_params(nl);
  // b^{beta-alpha} = alpha(2+beta)/((2+alpha)beta), omega0 = b^alpha (1 - b^{beta-alpha}).
  const double b = 1.0 * 4.0 / (3.0 * 2.0);
  EXPECT_NEAR(p.b, b, 1e-10);
  EXPECT_NEAR(p.omega0, b * (1.0 - b), 1e-10);
  EXPECT_NEAR(p.h_prime_b, 2.0 / 9.0, 1e-10);
  EXPECT_NEAR(2.0 * b - 3.0 * b * b, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.kink_alpha, 1.0);
  EXPECT_NEAR(p.s_star, (1.0 - std::sqrt(1.0 - 8.0 / 9.0)) / 2.0, 1e-10);

  // h(b) = 0 and int_0^b h = 0.
  EXPECT_NEAR(p.omega0 * p.b - nl.f_real(p.b), 0.0, 1e-10);
  EXPECT_NEAR(0.5 * p.omega0 * p.b * p.b - nl.F(p.b), 0.0, 1e-10);
}

TEST(KinkParams, SineExample) {
  const auto p = find_kink_params(Nonlinearity::sine_example());
  EXPECT_NEAR(p.b, 2.0 * std::numbers::pi, 1e-10);
  EXPECT_NEAR(p.omega0, 1.0, 1e-10);
  EXPECT_NEAR(p.h_prime_b, 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(p.kink_alpha, 2.0);
  EXPECT_NEAR(p.s_star, std::numbers::pi, 1e-9);
}

TEST(KinkParams, PurePowerHasNoKink) {
  try {
    find_kink_params(Nonlinearity::pure_power(2.0));
    FAIL() << "expected NoKink";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoKink);
  }
}

TEST(KinkParams, CertificationRate) {
  const auto p = find_kink_params(Nonlinearity::double_power(1.0, 2.0));
  EXPECT_NEAR(kink_certification_rate(p), 0.2, 1e-10);
}

class KinkProfileTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto nl = Nonlinearity::double_power(1.0, 2.0);
    profile_ = new KinkProfile(solve_kink_profile(nl, find_kink_params(nl)));
  }
  static void TearDownTestSuite() { delete profile_; }
  static KinkProfile* profile_;
};

KinkProfile* KinkProfileTest::profile_ = nullptr;

TEST_F(KinkProfileTest, NormalizedAndMonotone) {
  const auto& k = *profile_;
  const auto& p = k.params();
  EXPECT_NEAR(k.node(k.center()), 0.0, 1e-12);
  EXPECT_NEAR(k.value_at_node(k.center()), 1.0 / 3.0, 1e-10);
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    EXPECT_LT(k.derivatives()[i], 0.0) << i;
    EXPECT_GT(k.gaps()[i], 0.0);
    EXPECT_GT(k.value_at_node(i), 0.0);
    EXPECT_LE(k.value_at_node(i), p.b);
  }
  const auto steepest = std::min_element(k.derivatives().begin(), k.derivatives().end()) - k.derivatives().begin();
  EXPECT_LE(std::abs(static_cast<long>(steepest) - static_cast<long>(k.center())), 1);
}

TEST_F(KinkProfileTest, LimitsReached) {
  const auto& k = *profile_;
  EXPECT_LT(k.params().b - k.value(-k.half_width()), 1e-6);
  EXPECT_LT(k.value(k.half_width()), 1e-6);
  EXPECT_NEAR(k.half_width(), 40.0 / std::sqrt(2.0 / 9.0), 1e-9);
}

TEST_F(KinkProfileTest, FirstIntegralAndOde) {
  for (double r : kink_first_integral_residuals(*profile_)) EXPECT_LT(std::abs(r), 1e-9);
  for (double r : kink_ode_residuals(*profile_)) EXPECT_LT(std::abs(r), 1e-8);
}

TEST_F(KinkProfileTest, IndependentFirstIntegralAtInterpolatedPoints) {
  const auto& k = *profile_;
  const auto& nl = k.nonlinearity();
  const double w0 = k.params().omega0;
  for (double s : {-31.7, -5.05, -0.33, 0.71, 4.4, 22.9}) {
    const double phi = k.value(s);
    const double dphi = k.derivative(s);
    EXPECT_NEAR(dphi * dphi - w0 * phi * phi + 2.0 * nl.F(phi), 0.0, 1e-9) << s;
  }
}

TEST_F(KinkProfileTest, DecayCertificate) {
  const auto& k = *profile_;
  const double a = kink_certification_rate(k.params());
  const auto cert = certify_kink_decay(k, a);
  EXPECT_TRUE(std::isfinite(cert.D_a));
  for (std::size_t i = 0; i < k.size(); i += 11) {
    const double s = k.node(i);
    EXPECT_LE(k.gaps()[i] + std::abs(k.derivatives()[i]), cert.D_a * std::exp(-a * std::abs(s)) * (1 + 1e-12));
  }
  try {
    certify_kink_decay(k, 1.2 * std::sqrt(k.params().omega0));
    FAIL() << "expected CertificateUnbounded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CertificateUnbounded);
  }
}

TEST(KinkProfile, SineExampleCertifies) {
  const auto nl = Nonlinearity::sine_example();
  const auto k = solve_kink_profile(nl, find_kink_params(nl));
  EXPECT_TRUE(std::isfinite(certify_kink_decay(k, 0.9).D_a));
  for (double r : kink_first_integral_residuals(k)) EXPECT_LT(std::abs(r), 1e-9);
}

TEST(KinkProfile, WrongPlateauIsSingular) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  auto p = find_kink_params(nl);
  p.b = 0.8;
  p.omega0 = nl.f_real(p.b) / p.b;
  EXPECT_THROW(solve_kink_profile(nl, p), Error);
}
