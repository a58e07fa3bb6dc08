#pragma once

#include <span>
#include <vector>

#include "nlstrain/exponents.hpp"
#include "nlstrain/grid.hpp"

namespace nlstrain {

/// (dx * sum |u|^p)^{1/p}; p = infinity gives the max modulus.
double lp_norm(std::span<const Complex> values, double dx, double p);
double lp_norm(const Field& field, double p);

/// Mixed norm of a time series of spatial norms: trapezoid L^q in time over
/// [t_start, t_end]; q = infinity takes the max.
double time_lq_norm(std::span<const double> times, std::span<const double> spatial_norms, double q,
                    double t_start);

/// Per-time spatial L^r norms of each pair's r, indexed like `pairs`.
struct NormSeries {
  std::vector<double> times;
  std::vector<AdmissiblePair> pairs;
  std::vector<std::vector<double>> spatial;  // spatial[pair][time]
};

/// sup over pairs of ||u||_{L^q_t L^r_x([t_start, t_end])}; needs at least 4 samples in range.
double strichartz_norm(const NormSeries& series, double t_start);
double strichartz_norm(std::span<const Field> snapshots, double t_start, std::span<const AdmissiblePair> pairs);

/// S([t_i, t_end]) for every sample index i, from backward cumulative trapezoid sums.
std::vector<double> strichartz_tail_profile(const NormSeries& series);

NormSeries make_norm_series(std::span<const Field> snapshots, std::span<const AdmissiblePair> pairs);

/// Default finite sample of admissible pairs for d = 1: (inf,2), (8,4), (4,inf).
std::vector<AdmissiblePair> default_pairs_d1();

/// values ~ C exp(-rate t), fitted by least squares on log values.
struct DecayFit {
  std::vector<double> times;
  std::vector<double> values;
  double C = 0.0;
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t used = 0;
};

struct FitOptions {
  double floor = 1e-13;  // samples at or below are excluded
  double t_min = -kInfinity;
  double t_max = kInfinity;
};

/// Throws DegenerateFit when fewer than 4 samples survive the window and floor.
DecayFit fit_exponential(std::span<const double> times, std::span<const double> values, const FitOptions& options = {});

/// Same, but a sample is also excluded when it does not exceed `margin` times its noise floor.
DecayFit fit_exponential_above(std::span<const double> times, std::span<const double> values,
                               std::span<const double> noise_floor, double margin, const FitOptions& options = {});

}  // namespace nlstrain
