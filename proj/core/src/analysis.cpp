#include "nlstrain/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nlstrain/error.hpp"

namespace nlstrain {

double lp_norm(std::span<const Complex> values, double dx, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the max modulus so large p does not overflow.
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  if (p == 2.0) {
    for (const Complex& v : values) sum += std::norm(v / m);
  } else {
    for (const Complex& v : values) sum += std::pow(std::abs(v) / m, p);
  }
  return m * std::pow(dx * sum, 1.0 / p);
}

double lp_norm(const Field& field, double p) { return lp_norm(field.values, field.grid.dx(), p); }

double time_lq_norm(std::span<const double> times, std::span<const double> spatial_norms, double q,
                    double t_start) {
  if (times.size() != spatial_norms.size()) throw Error(ErrorCode::InvalidArgument, "time/norm size mismatch");
  std::size_t first = 0;
  while (first < times.size() && times[first] < t_start - 1e-12) ++first;
  const std::size_t count = times.size() - first;
  if (count < 4) throw Error(ErrorCode::InsufficientSamples, "need at least 4 snapshots at/after t_start");
  if (std::isinf(q)) {
    return *std::max_element(spatial_norms.begin() + static_cast<std::ptrdiff_t>(first), spatial_norms.end());
  }
  double integral = 0.0;
  for (std::size_t i = first + 1; i < times.size(); ++i) {
    const double a = std::pow(spatial_norms[i - 1], q);
    const double b = std::pow(spatial_norms[i], q);
    integral += 0.5 * (times[i] - times[i - 1]) * (a + b);
  }
  return std::pow(integral, 1.0 / q);
}

double strichartz_norm(const NormSeries& series, double t_start) {
  double best = 0.0;
  for (std::size_t k = 0; k < series.pairs.size(); ++k) {
    best = std::max(best, time_lq_norm(series.times, series.spatial[k], series.pairs[k].q, t_start));
  }
  return best;
}

std::vector<double> strichartz_tail_profile(const NormSeries& series) {
  const std::size_t n = series.times.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < series.pairs.size(); ++k) {
    const double q = series.pairs[k].q;
    const auto& norms = series.spatial[k];
    if (norms.size() != n) throw Error(ErrorCode::InvalidArgument, "norm series size mismatch");
    double acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      if (std::isinf(q)) {
        acc = std::max(acc, norms[i]);
        out[i] = std::max(out[i], acc);
        continue;
      }
      if (i + 1 < n) {
        acc += 0.5 * (series.times[i + 1] - series.times[i]) * (std::pow(norms[i], q) + std::pow(norms[i + 1], q));
      }
      out[i] = std::max(out[i], std::pow(acc, 1.0 / q));
    }
  }
  return out;
}

NormSeries make_norm_series(std::span<const Field> snapshots, std::span<const AdmissiblePair> pairs) {
  NormSeries series;
  series.pairs.assign(pairs.begin(), pairs.end());
  series.spatial.resize(pairs.size());
  for (const Field& f : snapshots) {
    series.times.push_back(f.t);
    for (std::size_t k = 0; k < pairs.size(); ++k) series.spatial[k].push_back(lp_norm(f, pairs[k].r));
  }
  for (std::size_t i = 1; i < series.times.size(); ++i) {
    if (!(series.times[i] > series.times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "snapshots must be ordered by increasing time");
    }
  }
  return series;
}

double strichartz_norm(std::span<const Field> snapshots, double t_start, std::span<const AdmissiblePair> pairs) {
  return strichartz_norm(make_norm_series(snapshots, pairs), t_start);
}

std::vector<AdmissiblePair> default_pairs_d1() { return admissible_pairs(1, kInfinity); }

namespace {

DecayFit fit_selected(std::span<const double> times, std::span<const double> values, const std::vector<bool>& keep) {
  DecayFit fit;
  fit.times.assign(times.begin(), times.end());
  fit.values.assign(values.begin(), values.end());
  double n = 0.0;
  double st = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!keep[i]) continue;
    n += 1.0;
    st += times[i];
    sy += std::log(values[i]);
  }
  fit.used = static_cast<std::size_t>(n);
  if (fit.used < 4) throw Error(ErrorCode::DegenerateFit, "fewer than 4 usable samples");
  const double t_mean = st / n;
  const double y_mean = sy / n;
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!keep[i]) continue;
    const double dt = times[i] - t_mean;
    const double dy = std::log(values[i]) - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) throw Error(ErrorCode::DegenerateFit, "usable samples share a single time");
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.C = std::exp(y_mean - slope * t_mean);
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

}  // namespace

DecayFit fit_exponential(std::span<const double> times, std::span<const double> values, const FitOptions& options) {
  if (times.size() != values.size()) throw Error(ErrorCode::InvalidArgument, "time/value size mismatch");
  std::vector<bool> keep(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    keep[i] = std::isfinite(values[i]) && values[i] > options.floor && times[i] >= options.t_min &&
              times[i] <= options.t_max;
  }
  return fit_selected(times, values, keep);
}

DecayFit fit_exponential_above(std::span<const double> times, std::span<const double> values,
                               std::span<const double> noise_floor, double margin, const FitOptions& options) {
  if (times.size() != values.size() || times.size() != noise_floor.size()) {
    throw Error(ErrorCode::InvalidArgument, "time/value/floor size mismatch");
  }
  std::vector<bool> keep(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    keep[i] = std::isfinite(values[i]) && values[i] > options.floor && values[i] > margin * noise_floor[i] &&
              times[i] >= options.t_min && times[i] <= options.t_max;
  }
  return fit_selected(times, values, keep);
}

}  // namespace nlstrain
