#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nlstrain/error.hpp"
#include "nlstrain/grid.hpp"
#include "nlstrain/spectral.hpp"

using namespace nlstrain;
using std::numbers::pi;

TEST(Grid, NodesAndWavenumbers) {
  const Grid1D grid(2.0 * pi, 8);
  EXPECT_DOUBLE_EQ(grid.x(0), -pi);
  EXPECT_DOUBLE_EQ(grid.dx(), pi / 4.0);
  EXPECT_DOUBLE_EQ(grid.wavenumber(1), 1.0);
  EXPECT_DOUBLE_EQ(grid.wavenumber(4), -4.0);
  EXPECT_DOUBLE_EQ(grid.wavenumber(7), -1.0);
  EXPECT_DOUBLE_EQ(grid.max_wavenumber(), 4.0);
  EXPECT_THROW(Grid1D(1.0, 12), Error);
  EXPECT_EQ(next_power_of_two(1000), 1024u);
  EXPECT_TRUE(is_power_of_two(64));
  EXPECT_FALSE(is_power_of_two(96));
}

TEST(Spectral, RoundTripIsIdentity) {
  SpectralTransform fft(64);
  std::vector<Complex> v(64);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(std::sin(0.3 * i), std::cos(1.1 * i));
  auto w = v;
  fft.forward(w);
  fft.inverse(w);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(w[i] - v[i]), 0.0, 1e-14);
}

TEST(Spectral, DerivativeOfTrigonometricMode) {
  const Grid1D grid(2.0 * pi, 64);
  const FreePropagator prop(grid);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(3.0 * grid.x(i));
  const auto d = prop.derivative(v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(d[i] - 3.0 * std::cos(3.0 * grid.x(i))), 0.0, 1e-12);
}

TEST(Spectral, FreeGaussianMatchesExactSolution) {
  const Grid1D grid(80.0, 1024);
  const FreePropagator prop(grid);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-grid.x(i) * grid.x(i));
  const double t = 1.5;
  prop.apply(v, t);
  const Complex denom(1.0, 4.0 * t);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.x(i);
    const Complex exact = std::exp(-x * x / denom) / std::sqrt(denom);
    EXPECT_NEAR(std::abs(v[i] - exact), 0.0, 1e-12);
  }
}

TEST(Spectral, PropagatorIsUnitaryAndReversible) {
  const Grid1D grid(20.0, 256);
  const FreePropagator prop(grid);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(std::exp(-std::abs(grid.x(i))), 0.2 * std::tanh(grid.x(i)));
  const auto orig = v;
  prop.apply(v, 0.37);
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    m0 += std::norm(orig[i]);
    m1 += std::norm(v[i]);
  }
  EXPECT_NEAR(m1 / m0, 1.0, 1e-14);
  prop.apply(v, -0.37);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v[i] - orig[i]), 0.0, 1e-13);
}

TEST(Spectral, TailFractionOfBandLimitedSignal) {
  const Grid1D grid(2.0 * pi, 128);
  const FreePropagator prop(grid);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(2.0 * grid.x(i));
  EXPECT_LT(prop.spectral_tail_fraction(v), 1e-28);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += std::cos(62.0 * grid.x(i));
  EXPECT_NEAR(prop.spectral_tail_fraction(v), 0.5, 1e-12);
}
