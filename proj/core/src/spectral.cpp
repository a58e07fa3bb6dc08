#include "nlstrain/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "nlstrain/error.hpp"

namespace nlstrain {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<Complex> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

struct SpectralTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
};

SpectralTransform::SpectralTransform(std::size_t size) : size_(size), plans_(std::make_unique<Plans>()) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "transform size must be positive");
  std::vector<Complex> probe(size);
  const int n = static_cast<int>(size);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft_1d(n, as_fftw(probe), as_fftw(probe), FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft_1d(n, as_fftw(probe), as_fftw(probe), FFTW_BACKWARD, flags);
  if (plans_->forward == nullptr || plans_->backward == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "FFTW could not create a plan");
  }
}

SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform&&) noexcept = default;
SpectralTransform& SpectralTransform::operator=(SpectralTransform&&) noexcept = default;

void SpectralTransform::forward(std::span<Complex> data) const {
  if (data.size() != size_) throw Error(ErrorCode::InvalidArgument, "transform size mismatch");
  fftw_execute_dft(plans_->forward, as_fftw(data), as_fftw(data));
}

void SpectralTransform::inverse(std::span<Complex> data) const {
  if (data.size() != size_) throw Error(ErrorCode::InvalidArgument, "transform size mismatch");
  fftw_execute_dft(plans_->backward, as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(size_);
  for (Complex& v : data) v *= scale;
}

FreePropagator::FreePropagator(const Grid1D& grid)
    : grid_(grid), transform_(grid.size()), k2_(grid.size()) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.wavenumber(i);
    k2_[i] = k * k;
  }
}

void FreePropagator::apply_in_fourier(std::span<Complex> coefficients, double tau) const {
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double phase = -tau * k2_[i];
    coefficients[i] *= Complex(std::cos(phase), std::sin(phase));
  }
}

std::vector<Complex> FreePropagator::multiplier(double tau) const {
  std::vector<Complex> out(k2_.size());
  for (std::size_t i = 0; i < k2_.size(); ++i) out[i] = std::polar(1.0, -tau * k2_[i]);
  return out;
}

void FreePropagator::apply(std::span<Complex> values, double tau) const {
  transform_.forward(values);
  apply_in_fourier(values, tau);
  transform_.inverse(values);
}

std::vector<Complex> FreePropagator::derivative(std::span<const Complex> values) const {
  std::vector<Complex> out(values.begin(), values.end());
  transform_.forward(out);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    // The Nyquist mode has no odd partner; drop it.
    const double k = (i == n / 2) ? 0.0 : grid_.wavenumber(i);
    out[i] *= Complex(0.0, k);
  }
  transform_.inverse(out);
  return out;
}

double FreePropagator::spectral_tail_fraction(std::span<const Complex> values, double fraction) const {
  std::vector<Complex> scratch(values.begin(), values.end());
  transform_.forward(scratch);
  const double k_cut = (1.0 - fraction) * grid_.max_wavenumber();
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < scratch.size(); ++i) {
    const double p = std::norm(scratch[i]);
    total += p;
    if (std::abs(grid_.wavenumber(i)) >= k_cut) tail += p;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace nlstrain
