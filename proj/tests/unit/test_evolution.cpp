#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nlstrain/analysis.hpp"
#include "nlstrain/error.hpp"
#include "nlstrain/evolution.hpp"

using namespace nlstrain;
using std::numbers::pi;

namespace {

const Nonlinearity kCubic = Nonlinearity::pure_power(2.0);

// Cubic soliton sqrt(2 omega) sech(sqrt(omega)(x - x0 - v t)) with its carrier phase.
Complex soliton(double x, double t, double omega, double v, double x0) {
  const double y = std::sqrt(omega) * (x - x0 - v * t);
  return std::polar(std::sqrt(2.0 * omega) / std::cosh(y), omega * t + 0.5 * v * x - 0.25 * v * v * t);
}

Field soliton_field(const Grid1D& grid, double t, double omega, double v, double x0) {
  Field f(grid, t);
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = soliton(grid.x(i), t, omega, v, x0);
  return f;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(SplitStep, PlaneWaveIsExact) {
  const Grid1D grid(2.0 * pi, 64);
  const double amp = 0.8;
  const double k = 3.0;
  const double omega = k * k - amp * amp;
  Field u(grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) u.values[i] = std::polar(amp, k * grid.x(i));
  const auto r = evolve(u, 1.0, 1e-3, kCubic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(std::abs(r.field.values[i] - std::polar(amp, k * grid.x(i) - omega)), 0.0, 1e-11);
  }
}

TEST(SplitStep, SolitonConvergesAtSecondOrder) {
  const Grid1D grid(60.0, 1024);
  const Field u0 = soliton_field(grid, 0.0, 1.0, 1.0, -5.0);
  const Field exact = soliton_field(grid, 1.0, 1.0, 1.0, -5.0);
  const double e1 = max_diff(evolve(u0, 1.0, 2e-3, kCubic).field.values, exact.values);
  const double e2 = max_diff(evolve(u0, 1.0, 1e-3, kCubic).field.values, exact.values);
  EXPECT_LT(e2, 1e-5);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(SplitStep, MassConservedToRoundoff) {
  const Grid1D grid(60.0, 1024);
  EvolveOptions opt;
  opt.report_every = 100;
  const auto r = evolve(soliton_field(grid, 0.0, 1.0, 0.5, 0.0), 1.0, 1e-3, kCubic, opt);
  EXPECT_LT(r.report.max_mass_drift, 1e-12);
  EXPECT_LT(r.report.max_energy_drift, 1e-5);
  EXPECT_EQ(r.report.times.size(), 11u);
  EXPECT_TRUE(r.report.resolved);
  EXPECT_NEAR(r.report.mass.front(), 4.0, 1e-10);
}

TEST(SplitStep, EnergyOfSolitonMatchesClosedForm) {
  // E = int |u_x|^2/2 - |u|^4/4 for the cubic soliton with omega = 1, v = 0 is -2/3.
  const Grid1D grid(60.0, 1024);
  const SplitStepIntegrator integrator(grid, kCubic);
  EXPECT_NEAR(integrator.energy(soliton_field(grid, 0.0, 1.0, 0.0, 0.0).values), -2.0 / 3.0, 1e-10);
}

TEST(SplitStep, GaugeCovariance) {
  const Grid1D grid(40.0, 512);
  const Field u0 = soliton_field(grid, 0.0, 1.0, 1.0, 0.0);
  Field rotated = u0;
  const Complex phase = std::polar(1.0, 1.234);
  for (auto& v : rotated.values) v *= phase;
  auto a = evolve(u0, 0.5, 1e-3, kCubic).field.values;
  const auto b = evolve(rotated, 0.5, 1e-3, kCubic).field.values;
  for (auto& v : a) v *= phase;
  EXPECT_LT(max_diff(a, b), 1e-13);
}

TEST(SplitStep, GalileanCovariance) {
  const Grid1D grid(40.0, 512);
  const double w = 4.0 * pi * 3.0 / grid.length();  // e^{i w x / 2} periodic on the grid
  const double t = 16.0 * grid.dx() / w;            // shift of exactly 16 nodes
  const std::size_t steps = 400;
  Field u0(grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    u0.values[i] = Complex(1.2 / std::cosh(x), 0.3 * std::exp(-x * x));
  }
  Field moving = u0;
  for (std::size_t i = 0; i < grid.size(); ++i) moving.values[i] *= std::polar(1.0, 0.5 * w * grid.x(i));

  const SplitStepIntegrator integrator(grid, kCubic);
  auto rest = u0.values;
  auto boosted = moving.values;
  integrator.advance(rest, t / steps, steps);
  integrator.advance(boosted, t / steps, steps);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = (i + grid.size() - 16) % grid.size();
    const Complex expected = std::polar(1.0, 0.5 * w * grid.x(i) - 0.25 * w * w * t) * rest[j];
    worst = std::max(worst, std::abs(boosted[i] - expected));
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(SplitStep, BackwardStepsUndoForwardSteps) {
  const Grid1D grid(40.0, 512);
  const Field u0 = soliton_field(grid, 0.0, 1.0, 2.0, -3.0);
  const SplitStepIntegrator integrator(grid, Nonlinearity::double_power(1.0, 2.0));
  auto u = u0.values;
  integrator.advance(u, 1e-3, 500);
  integrator.advance(u, -1e-3, 500);
  EXPECT_LT(max_diff(u, u0.values), 1e-12);
}

TEST(SplitStep, NonFiniteIsReported) {
  const Grid1D grid(40.0, 256);
  Field u = soliton_field(grid, 0.0, 1.0, 0.0, 0.0);
  u.values[17] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    evolve(u, 0.1, 1e-3, kCubic);
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Evolve, FractionalFinalStepLandsOnTarget) {
  const Grid1D grid(40.0, 256);
  const Field u0 = soliton_field(grid, 0.0, 1.0, 0.0, 0.0);
  const auto r = evolve(u0, 0.1005, 1e-3, kCubic);
  EXPECT_DOUBLE_EQ(r.field.t, 0.1005);
  const Field exact = soliton_field(grid, 0.1005, 1.0, 0.0, 0.0);
  EXPECT_LT(max_diff(r.field.values, exact.values), 1e-6);
  EXPECT_THROW(evolve(u0, -1.0, 1e-3, kCubic), Error);
  const Field one = step(u0, 1e-3, kCubic);
  EXPECT_DOUBLE_EQ(one.t, 1e-3);
}

TEST(Convergence, TwoSolitonTrainErrorDecays) {
  const auto nl = Nonlinearity::pure_power(1.0);
  const auto spec = preset(PresetKind::A, 2, 20.0, 1.0, nl);
  ConvergenceOptions opt;
  opt.keep_eta_at = {0.5};
  const auto r = train_convergence_experiment(spec, 2.0, 1e-3, opt);
  EXPECT_DOUBLE_EQ(r.frame_velocity, default_frame_velocity(spec));
  EXPECT_EQ(r.series.times.front(), 0.0);
  EXPECT_NEAR(r.series.times.back(), 2.0, 1e-12);
  // eta vanishes at T and is largest where the solitons still overlap.
  EXPECT_LT(r.series.l2.back(), 1e-12);
  EXPECT_GT(r.series.l2.front(), 10.0 * r.series.floor_l2.front());
  ASSERT_TRUE(r.fit_l2.has_value());
  EXPECT_GT(r.fit_l2->rate, 0.0);
  EXPECT_LT(r.max_mass_drift, 1e-11);
  ASSERT_EQ(r.kept_eta.size(), 1u);
  EXPECT_NEAR(r.kept_eta[0].t, 0.5, 1e-12);
  for (std::size_t i = 1; i < r.series.strichartz.size(); ++i) {
    EXPECT_LE(r.series.strichartz[i], r.series.strichartz[i - 1] * (1 + 1e-12));
  }
}

TEST(Convergence, LabNormsDoNotDependOnFrame) {
  const auto nl = Nonlinearity::pure_power(1.0);
  const auto spec = preset(PresetKind::A, 2, 20.0, 1.0, nl);
  ConvergenceOptions a;
  a.estimate_floor = false;
  ConvergenceOptions b = a;
  b.frame_velocity = default_frame_velocity(spec) + 4.0 * pi / 10.0;
  const auto ra = train_convergence_experiment(spec, 1.0, 1e-3, a);
  const auto rb = train_convergence_experiment(spec, 1.0, 1e-3, b);
  ASSERT_EQ(ra.series.times.size(), rb.series.times.size());
  for (std::size_t i = 0; i < ra.series.times.size(); ++i) {
    EXPECT_NEAR(ra.series.l2[i], rb.series.l2[i], 1e-3 * ra.series.l2[i] + 1e-9) << ra.series.times[i];
    // Node-wise sup of a field displaced by a fraction of a cell between frames.
    EXPECT_NEAR(ra.series.linf[i], rb.series.linf[i], 1e-2 * ra.series.linf[i] + 1e-9) << ra.series.times[i];
  }
}
