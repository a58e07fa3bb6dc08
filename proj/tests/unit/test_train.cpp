#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "nlstrain/analysis.hpp"
#include "nlstrain/error.hpp"
#include "nlstrain/spectral.hpp"
#include "nlstrain/train.hpp"

using namespace nlstrain;

namespace {

const Nonlinearity kCubic = Nonlinearity::pure_power(2.0);

// Exhaustive pair scan, partners k over waves (and the kink velocity when given).
double brute_v_star(const TrainSpec& spec, bool with_kink) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = spec.waves.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j != k) best = std::min(best, std::sqrt(spec.waves[j].omega) * std::abs(spec.waves[k].v - spec.waves[j].v));
    }
    if (with_kink) best = std::min(best, std::sqrt(spec.waves[j].omega) * std::abs(spec.kink->v0 - spec.waves[j].v));
  }
  return best;
}

}  // namespace

TEST(Preset, LawA) {
  const auto spec = preset(PresetKind::A, 3, 10.0, 1.0, kCubic);
  ASSERT_EQ(spec.waves.size(), 3u);
  EXPECT_DOUBLE_EQ(spec.waves[0].omega, 0.25);
  EXPECT_DOUBLE_EQ(spec.waves[1].omega, 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(spec.waves[2].omega, 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(spec.waves[0].v, 40.0);
  EXPECT_DOUBLE_EQ(spec.waves[1].v, 80.0);
  EXPECT_DOUBLE_EQ(spec.waves[2].v, 160.0);
  for (const auto& w : spec.waves) {
    EXPECT_EQ(w.gamma, 0.0);
    EXPECT_EQ(w.x0, 0.0);
  }
}

TEST(Preset, LawB) {
  const auto spec = preset(PresetKind::B, 2, 10.0, 2.0, kCubic);
  EXPECT_DOUBLE_EQ(spec.waves[0].v, 80.0);
  EXPECT_DOUBLE_EQ(spec.waves[1].v, -80.0);
  EXPECT_THROW(preset(PresetKind::B, 2, 10.0, 1.0, kCubic), Error);
  EXPECT_THROW(preset(PresetKind::A, 0, 10.0, 1.0, kCubic), Error);
}

TEST(Diagnostics, SingleSolitonHasInfiniteVStar) {
  const auto d = compute_diagnostics(preset(PresetKind::A, 1, 10.0, 1.0, kCubic), DiagnosticsVariant::TrainOnly);
  EXPECT_TRUE(std::isinf(d.v_star));
}

TEST(Diagnostics, PresetAVStarBruteForce) {
  const auto spec = preset(PresetKind::A, 6, 10.0, 1.0, Nonlinearity::pure_power(1.0));
  const auto d = compute_diagnostics(spec, DiagnosticsVariant::TrainOnly);
  EXPECT_DOUBLE_EQ(d.v_star, brute_v_star(spec, false));
  EXPECT_DOUBLE_EQ(d.v_star, 10.0);
  const auto d2 = compute_diagnostics(preset(PresetKind::A, 6, 20.0, 1.0, Nonlinearity::pure_power(1.0)),
                                      DiagnosticsVariant::TrainOnly);
  EXPECT_DOUBLE_EQ(d2.v_star, 2.0 * d.v_star);
}

TEST(Diagnostics, SumsMatchDirectEvaluation) {
  const auto nl = Nonlinearity::pure_power(1.0);
  const auto spec = preset(PresetKind::A, 4, 5.0, 1.0, nl);
  const auto d = compute_diagnostics(spec, DiagnosticsVariant::TrainOnly);
  double a1 = 0.0;
  double a2 = 0.0;
  double vs = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double w = std::pow(4.0, -j);
    const double v = std::pow(2.0, j + 1) * 5.0;
    a1 += std::pow(w, 1.0 - 1.0 / (2.0 * spec.r0));
    a2 += w;
    vs += std::sqrt(1.0 + v * v) * std::pow(w, 0.75);
  }
  EXPECT_NEAR(d.A1, a1, 1e-14);
  EXPECT_NEAR(d.A2, a2, 1e-14);
  EXPECT_NEAR(d.V_star, vs, 1e-12);
  EXPECT_GT(d.tail_A1, 0.0);
}

TEST(Diagnostics, PresetAVStarGrowthDependsOnAlpha) {
  // V_* terms scale like 2^{j} 4^{-j(1/alpha1 - 1/4)}: summable iff alpha1 < 4/3.
  auto ratio = [](double alpha) {
    const auto nl = Nonlinearity::pure_power(alpha);
    const double v10 = compute_diagnostics(preset(PresetKind::A, 10, 10.0, 1.0, nl), DiagnosticsVariant::TrainOnly).V_star;
    const double v20 = compute_diagnostics(preset(PresetKind::A, 20, 10.0, 1.0, nl), DiagnosticsVariant::TrainOnly).V_star;
    return v20 / v10;
  };
  EXPECT_LT(ratio(1.0), 1.05);
  EXPECT_GT(ratio(2.0), 10.0);
}

TEST(Diagnostics, PresetBScalesWithH) {
  const auto nl = Nonlinearity::pure_power(1.0);
  // Only odd waves carry h, so V_* becomes linear in h once those dominate.
  const auto d1 = compute_diagnostics(preset(PresetKind::B, 6, 10.0, 50.0, nl), DiagnosticsVariant::TrainOnly);
  const auto d2 = compute_diagnostics(preset(PresetKind::B, 6, 10.0, 100.0, nl), DiagnosticsVariant::TrainOnly);
  EXPECT_NEAR(d2.V_star / d1.V_star, 2.0, 0.1);
  EXPECT_DOUBLE_EQ(d1.v_star, d2.v_star);
}

TEST(Diagnostics, KinkPartnerEntersVStar) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const auto spec = make_train_spec(nl, {{0.05, 3.0}, {0.02, 9.0}}, KinkWave{0.0, 0.0, 0.0});
  const auto d = compute_diagnostics(spec, DiagnosticsVariant::WithKink);
  EXPECT_DOUBLE_EQ(d.v_star, brute_v_star(spec, true));
  EXPECT_THROW(make_train_spec(nl, {{0.05, -1.0}}, KinkWave{}), Error);
  EXPECT_THROW(compute_diagnostics(preset(PresetKind::A, 2, 1.0, 1.0, Nonlinearity::pure_power(1.0)),
                                   DiagnosticsVariant::WithKink),
               Error);
}

TEST(Boost, ShiftsEveryVelocity) {
  const auto spec = preset(PresetKind::A, 3, 10.0, 1.0, kCubic);
  const auto b = boosted(spec, 60.0);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(b.waves[j].v, spec.waves[j].v - 60.0);
  EXPECT_DOUBLE_EQ(default_frame_velocity(spec), 100.0);
}

class TrainProfileTest : public ::testing::Test {
 protected:
  std::shared_ptr<BoundStateCache> cache = std::make_shared<BoundStateCache>(kCubic);
  Grid1D grid{200.0, 4096};
};

TEST_F(TrainProfileTest, SingleSolitonAtTimeZero) {
  const auto spec = make_train_spec(kCubic, {{1.0, 3.0}});
  const TrainModel model(spec, cache);
  const Field w = model.profile(0.0, grid);
  for (std::size_t i = 0; i < grid.size(); i += 13) {
    const double x = grid.x(i);
    const Complex expected = std::polar(std::sqrt(2.0) / std::cosh(x), 1.5 * x);
    EXPECT_NEAR(std::abs(w.values[i] - expected), 0.0, 1e-6);
  }
}

TEST_F(TrainProfileTest, TravellingPhaseAndPosition) {
  const double omega = 0.5;
  const double v = 2.0;
  const double gamma = 0.3;
  const double t = 1.7;
  const auto spec = make_train_spec(kCubic, {{omega, v, gamma, -4.0}});
  const TrainModel model(spec, cache);
  const Field w = model.profile(t, grid);
  const auto bs = cache->get(omega);
  for (std::size_t i = 0; i < grid.size(); i += 17) {
    const double x = grid.x(i);
    const double phase = omega * t + 0.5 * v * x - 0.25 * v * v * t + gamma;
    const Complex expected = std::polar(bs->profile.even_value(x + 4.0 - v * t), phase);
    EXPECT_NEAR(std::abs(w.values[i] - expected), 0.0, 1e-12);
  }
}

TEST_F(TrainProfileTest, SuperpositionIsLiteral) {
  const std::vector<SolitonParam> waves{{1.0, -3.0, 0.0, -20.0}, {0.5, 2.0, 1.0, 15.0}};
  const TrainModel both(make_train_spec(kCubic, waves), cache);
  const TrainModel first(make_train_spec(kCubic, {waves[0]}), cache);
  const TrainModel second(make_train_spec(kCubic, {waves[1]}), cache);
  const Field w = both.profile(0.8, grid);
  const Field a = first.profile(0.8, grid);
  const Field b = second.profile(0.8, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(w.values[i], a.values[i] + b.values[i]);
}

TEST_F(TrainProfileTest, GalileanPhaseIdentity) {
  const std::vector<SolitonParam> waves{{1.0, -3.0}, {0.25, 4.0}};
  const auto spec = make_train_spec(kCubic, waves);
  const double w = 1.5;
  const Field lab = TrainModel(spec, cache).profile(0.0, grid);
  const Field moving = TrainModel(boosted(spec, w), cache).profile(0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(std::abs(lab.values[i] - std::polar(1.0, 0.5 * w * grid.x(i)) * moving.values[i]), 0.0, 1e-13);
  }
}

TEST_F(TrainProfileTest, AnalyticGradientMatchesSpectral) {
  const auto spec = make_train_spec(kCubic, {{1.0, -3.0, 0.0, -10.0}, {0.5, 2.0, 0.4, 12.0}});
  const auto [w, dw] = TrainModel(spec, cache).profile_with_gradient(0.5, grid);
  const FreePropagator prop(grid);
  const auto spectral = prop.derivative(w.values);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(std::abs(dw.values[i] - spectral[i]), 0.0, 1e-6);
}

TEST_F(TrainProfileTest, SourceVanishesForOneSoliton) {
  const TrainModel model(make_train_spec(kCubic, {{1.0, 2.0}}), cache);
  const Field h = model.source_term(0.7, grid);
  for (const auto& v : h.values) EXPECT_EQ(v, Complex(0.0, 0.0));
  const std::vector<double> times{0.0, 0.5, 1.0, 1.5};
  const auto table = source_decay_scan(model, times, grid);
  for (double v : table.linf) EXPECT_EQ(v, 0.0);
  for (double v : table.grad_l2) EXPECT_EQ(v, 0.0);
}

TEST_F(TrainProfileTest, SourceOfOverlappingPair) {
  const auto nl = Nonlinearity::pure_power(1.0);
  auto c = std::make_shared<BoundStateCache>(nl);
  const TrainModel model(preset(PresetKind::A, 2, 20.0, 1.0, nl), c);
  const Grid1D g = auto_grid(model, 2.0);
  EXPECT_GT(lp_norm(model.source_term(0.0, g), kInfinity), 0.01);

  // Pointwise oracle: H = f(R1 + R2) - f(R1) - f(R2).
  std::vector<Complex> r1(g.size());
  std::vector<Complex> r2(g.size());
  std::vector<Complex> d(g.size());
  model.sample_component(0, 0.3, g, r1, d);
  model.sample_component(1, 0.3, g, r2, d);
  const Field h = model.source_term(0.3, g);
  for (std::size_t i = 0; i < g.size(); i += 5) {
    const Complex expected = nl.f(r1[i] + r2[i]) - nl.f(r1[i]) - nl.f(r2[i]);
    EXPECT_NEAR(std::abs(h.values[i] - expected), 0.0, 1e-14);
  }
}

TEST_F(TrainProfileTest, SourceDecaysAsSolitonsSeparate) {
  const auto nl = Nonlinearity::pure_power(1.0);
  auto c = std::make_shared<BoundStateCache>(nl);
  const auto spec = preset(PresetKind::A, 2, 20.0, 1.0, nl);
  const TrainModel model(spec, c);
  const Grid1D g = auto_grid(model, 3.0);
  std::vector<double> times;
  for (int i = 0; i <= 60; ++i) times.push_back(0.05 * i);
  const auto table = source_decay_scan(model, times, g);
  ASSERT_TRUE(table.linf_fit.has_value());
  EXPECT_GT(table.linf_fit->rate, 0.0);
  EXPECT_LT(table.linf.back(), 1e-3 * table.linf.front());
}

TEST_F(TrainProfileTest, SeamContactIsRejected) {
  const TrainModel model(make_train_spec(kCubic, {{1.0, 10.0}}), cache);
  try {
    model.check_grid(Grid1D(60.0, 1024), 0.0, 5.0);
    FAIL() << "expected GridTooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooSmall);
  }
  EXPECT_NO_THROW(model.check_grid(auto_grid(model, 5.0), 0.0, 5.0));
}

TEST(GradientRates, BothCandidates) {
  const auto [a, b] = gradient_rate_candidates(0.9, 1.0, 10.0);
  EXPECT_NEAR(a, 0.9 * 1.0 * 10.0 / 4.0, 1e-15);
  EXPECT_NEAR(b, 0.9 / 4.0 * 1.0 * 10.0, 1e-15);
  const auto [c, d] = gradient_rate_candidates(0.3, 0.2, 10.0);
  EXPECT_NEAR(c, 0.3 * 0.6 * 10.0 / 4.0, 1e-15);
  EXPECT_NEAR(d, 0.3 / 4.0 * 0.4 * 10.0, 1e-15);
}

TEST(KinkTrain, SourceDecaysWithPositiveRate) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const auto spec = make_train_spec(nl, {{0.05, 4.0}}, KinkWave{});
  std::vector<double> times;
  for (int i = 0; i <= 40; ++i) times.push_back(1.0 + 0.25 * i);
  const TrainModel model(spec, std::make_shared<BoundStateCache>(nl));
  const Grid1D g = auto_grid(model, times.back());
  const auto table = source_decay_scan(model, times, g);
  ASSERT_TRUE(table.linf_fit.has_value());
  EXPECT_GT(table.linf_fit->rate, 0.0);
}
