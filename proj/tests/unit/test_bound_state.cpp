#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nlstrain/bound_state.hpp"
#include "nlstrain/error.hpp"

using namespace nlstrain;

namespace {

// Q'' - Q + Q^{alpha+1} by fourth-order central differences.
double closed_form_residual(double alpha, double x) {
  const double h = 1e-3;
  const double q2 = (-closed_form_Q(alpha, x + 2 * h) + 16 * closed_form_Q(alpha, x + h) - 30 * closed_form_Q(alpha, x) +
                     16 * closed_form_Q(alpha, x - h) - closed_form_Q(alpha, x - 2 * h)) /
                    (12 * h * h);
  const double q = closed_form_Q(alpha, x);
  return q2 - q + std::pow(q, alpha + 1.0);
}

}  // namespace

TEST(ClosedFormQ, ValuesAndResidual) {
  EXPECT_NEAR(closed_form_Q(2.0, 0.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(closed_form_Q(1.0, 0.0), 1.5, 1e-15);
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (double x : {0.0, 0.4, 1.3, 3.0, 6.0}) EXPECT_NEAR(closed_form_residual(alpha, x), 0.0, 1e-8) << alpha << " " << x;
  }
  // sech tail: Q(x) e^{x} -> 2 sqrt(2).
  EXPECT_NEAR(closed_form_Q(2.0, 30.0) * std::exp(30.0), 2.0 * std::sqrt(2.0), 1e-10);
  const double h = 1e-5;
  EXPECT_NEAR(closed_form_Q_prime(2.0, 0.7), (closed_form_Q(2.0, 0.7 + h) - closed_form_Q(2.0, 0.7 - h)) / (2 * h), 1e-9);
}

TEST(SolveBoundState, CubicGroundState) {
  const auto s = solve_bound_state(Nonlinearity::pure_power(2.0), 1.0, 1);
  EXPECT_NEAR(s.phi0, std::sqrt(2.0), 1e-6);
  EXPECT_LT(s.residual, 1e-8);
  for (double r : {0.0, 0.5, 2.0, 7.0}) EXPECT_NEAR(s.profile.value(r), std::sqrt(2.0) / std::cosh(r), 1e-6) << r;
}

TEST(SolveBoundState, PowerFamilyAmplitude) {
  for (double alpha : {1.0, 3.0}) {
    const auto s = solve_bound_state(Nonlinearity::pure_power(alpha), 1.0, 1);
    EXPECT_NEAR(s.phi0, std::pow((alpha + 2.0) / 2.0, 1.0 / alpha), 1e-6) << alpha;
  }
}

TEST(SolveBoundState, ScalingIdentity) {
  const double alpha = 2.0;
  const double omega = 0.3;
  const auto s = solve_bound_state(Nonlinearity::pure_power(alpha), omega, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.profile.size(); i += 7) {
    const double r = s.profile.node(i);
    const double expected = std::pow(omega, 1.0 / alpha) * closed_form_Q(alpha, std::sqrt(omega) * r);
    worst = std::max(worst, std::abs(s.profile.values()[i] - expected));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(SolveBoundState, MonotoneAndPositive) {
  const auto s = solve_bound_state(Nonlinearity::double_power(1.0, 2.0), 0.05, 1);
  const auto& v = s.profile.values();
  EXPECT_GT(v.front(), 0.0);
  EXPECT_EQ(s.profile.derivatives().front(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    EXPECT_GT(v[i], 0.0);
    EXPECT_LT(v[i], v[i - 1]);
  }
  for (double r : bound_state_residuals(s)) EXPECT_LT(std::abs(r), 1e-8);
}

TEST(SolveBoundState, HigherDimensionalCubic) {
  // Known central amplitudes of the cubic ground state in 2 and 3 dimensions.
  EXPECT_NEAR(solve_bound_state(Nonlinearity::pure_power(2.0), 1.0, 2).phi0, 2.2062, 1e-3);
  EXPECT_NEAR(solve_bound_state(Nonlinearity::pure_power(2.0), 1.0, 3).phi0, 4.3374, 1e-3);
}

TEST(SolveBoundState, RejectsNonPositiveFrequency) {
  EXPECT_THROW(solve_bound_state(Nonlinearity::pure_power(2.0), 0.0, 1), Error);
}

TEST(SolveBoundState, DoublePowerOutsideExistenceRange) {
  // ground states of |u|u - |u|^2 u need omega < 2/9.
  try {
    solve_bound_state(Nonlinearity::double_power(1.0, 2.0), 0.5, 1);
    FAIL() << "expected NoBoundState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBoundState);
  }
}

TEST(DecayCertificate, CubicMatchesClosedFormMaximum) {
  const auto s = solve_bound_state(Nonlinearity::pure_power(2.0), 1.0, 1);
  const double a = 0.9;
  const auto cert = certify_decay(s, a);
  double expected = 0.0;
  for (double r = 0.0; r < 30.0; r += 1e-4) {
    const double q = std::sqrt(2.0) / std::cosh(r);
    expected = std::max(expected, (q + q * std::tanh(r)) * std::pow(1.0, -0.5) * std::exp(a * r));
  }
  EXPECT_NEAR(cert.D_a, expected, 1e-4 * expected);
  EXPECT_DOUBLE_EQ(cert.a, a);
}

TEST(DecayCertificate, ShortGridIsUnbounded) {
  // Closed-form profile truncated at r = 3, before e^{-r} dominates the a = 0.999 envelope.
  std::vector<double> v;
  std::vector<double> dv;
  for (int i = 0; i <= 300; ++i) {
    v.push_back(closed_form_Q(2.0, 0.01 * i));
    dv.push_back(closed_form_Q_prime(2.0, 0.01 * i));
  }
  const BoundState s{Nonlinearity::pure_power(2.0), 1.0, 1, RadialProfile(1, 3.0, 1.0, v, dv), v[0], 0.0, 0.0};
  EXPECT_NO_THROW(certify_decay(s, 0.5));
  try {
    certify_decay(s, 0.999);
    FAIL() << "expected CertificateUnbounded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CertificateUnbounded);
  }
}

TEST(DecayCertificate, UniformAcrossSmallFrequencies) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const double d1 = certify_decay(solve_bound_state(nl, 0.05, 1), 0.9).D_a;
  const double d2 = certify_decay(solve_bound_state(nl, 0.025, 1), 0.9).D_a;
  EXPECT_TRUE(std::isfinite(d1));
  EXPECT_LT(std::max(d1, d2) / std::min(d1, d2), 2.0);
}

TEST(Bifurcation, PredictedExponent) {
  EXPECT_DOUBLE_EQ(predicted_bifurcation_exponent(Nonlinearity::double_power(1.0, 2.0)), 1.0);
  EXPECT_DOUBLE_EQ(predicted_bifurcation_exponent(Nonlinearity::double_power(2.0, 4.0)), 1.0);
}

TEST(Bifurcation, HalvingFrequencyShrinksCorrection) {
  const std::vector<double> omegas{0.04, 0.02, 0.01};
  const auto rep = bifurcation_scan(Nonlinearity::double_power(1.0, 2.0), omegas);
  ASSERT_EQ(rep.points.size(), 3u);
  for (std::size_t i = 1; i < rep.points.size(); ++i) {
    const double ratio = rep.points[i].sup_xi / rep.points[i - 1].sup_xi;
    EXPECT_NEAR(ratio, 0.5, 0.15);
  }
  EXPECT_NEAR(rep.m_fitted, 1.0, 0.3);
}
