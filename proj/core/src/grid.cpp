#include "nlstrain/grid.hpp"

#include <cmath>
#include <numbers>

#include "nlstrain/error.hpp"

namespace nlstrain {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Grid1D::Grid1D(double length, std::size_t nodes) : length_(length), size_(nodes) {
  if (!(length > 0.0) || !std::isfinite(length)) throw Error(ErrorCode::InvalidArgument, "grid length must be > 0");
  if (!is_power_of_two(nodes) || nodes < 4) {
    throw Error(ErrorCode::InvalidArgument, "grid size must be a power of two >= 4");
  }
}

double Grid1D::wavenumber(std::size_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(i);
  const auto half = static_cast<std::ptrdiff_t>(size_ / 2);
  const std::ptrdiff_t m = n < half ? n : n - static_cast<std::ptrdiff_t>(size_);
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

double Grid1D::max_wavenumber() const noexcept { return std::numbers::pi / dx(); }

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = x(i);
  return out;
}

std::vector<double> Grid1D::wavenumbers() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = wavenumber(i);
  return out;
}

Field::Field(Grid1D grid_in, double t_in, std::vector<Complex> values_in)
    : grid(grid_in), t(t_in), values(std::move(values_in)) {
  if (values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "field size does not match its grid");
}

bool Field::all_finite() const noexcept {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace nlstrain
