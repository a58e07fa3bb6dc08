#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlstrain {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2) with N (a power of two) nodes.
class Grid1D {
 public:
  Grid1D(double length, std::size_t nodes);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return size_; }
  double dx() const noexcept { return length_ / static_cast<double>(size_); }
  double x(std::size_t i) const noexcept { return -0.5 * length_ + static_cast<double>(i) * dx(); }
  /// Wavenumber of FFT bin i: 2 pi n / L with n in [-N/2, N/2).
  double wavenumber(std::size_t i) const noexcept;
  double max_wavenumber() const noexcept;

  std::vector<double> nodes() const;
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double length_;
  std::size_t size_;
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Samples of u(t, .) on a fixed grid.
struct Field {
  Field(Grid1D grid_in, double t_in) : grid(grid_in), t(t_in), values(grid_in.size()) {}
  Field(Grid1D grid_in, double t_in, std::vector<Complex> values_in);

  Grid1D grid;
  double t;
  std::vector<Complex> values;

  std::span<const Complex> view() const noexcept { return values; }
  bool all_finite() const noexcept;
};

}  // namespace nlstrain
