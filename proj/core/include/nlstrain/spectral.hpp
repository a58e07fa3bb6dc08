#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nlstrain/grid.hpp"

namespace nlstrain {

/// In-place complex FFT of a fixed size, backed by FFTW plans.
///
/// Plans are created under a global lock (the FFTW planner is not re-entrant);
/// executing distinct transforms on distinct buffers is safe concurrently.
class SpectralTransform {
 public:
  explicit SpectralTransform(std::size_t size);
  ~SpectralTransform();
  SpectralTransform(SpectralTransform&&) noexcept;
  SpectralTransform& operator=(SpectralTransform&&) noexcept;
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  std::size_t size() const noexcept { return size_; }

  /// Unnormalized forward transform.
  void forward(std::span<Complex> data) const;
  /// Inverse transform including the 1/N factor.
  void inverse(std::span<Complex> data) const;

 private:
  struct Plans;
  std::size_t size_;
  std::unique_ptr<Plans> plans_;
};

/// Applies the free Schrödinger group e^{i tau Delta} (multiplier e^{-i tau k^2}).
class FreePropagator {
 public:
  explicit FreePropagator(const Grid1D& grid);

  const Grid1D& grid() const noexcept { return grid_; }
  const SpectralTransform& transform() const noexcept { return transform_; }

  void apply(std::span<Complex> values, double tau) const;
  /// Multiplies Fourier coefficients by e^{-i tau k^2}.
  void apply_in_fourier(std::span<Complex> coefficients, double tau) const;

  /// Tabulated e^{-i tau k^2}, for repeated application with a fixed tau.
  std::vector<Complex> multiplier(double tau) const;

  /// Spectral derivative d/dx.
  std::vector<Complex> derivative(std::span<const Complex> values) const;

  /// Fraction of sum |u_hat|^2 carried by the top `fraction` of |k|.
  double spectral_tail_fraction(std::span<const Complex> values, double fraction = 0.1) const;

 private:
  Grid1D grid_;
  SpectralTransform transform_;
  std::vector<double> k2_;
};

}  // namespace nlstrain
