#include "nlstrain/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlstrain/error.hpp"
#include "nlstrain/evolution.hpp"
#include "nlstrain/spectral.hpp"

namespace nlstrain {

TimeGrid::TimeGrid(double T, std::size_t intervals) : T_(T), M_(intervals) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "time grid needs T > 0");
  if (intervals < 8) throw Error(ErrorCode::InvalidArgument, "time grid needs at least 8 intervals");
}

TimeGrid TimeGrid::with_spacing(double T, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time grid spacing must be positive");
  const auto m = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  return TimeGrid(T, std::max<std::size_t>(m, 8));
}

namespace {

struct LevelNorms {
  std::vector<double> l2;
  std::vector<double> l4;
  std::vector<double> lr2;
  std::vector<double> linf;

  void resize(std::size_t n) {
    for (auto* v : {&l2, &l4, &lr2, &linf}) v->assign(n, 0.0);
  }
  void record(std::size_t m, std::span<const Complex> u, double dx, double r2) {
    double s2 = 0.0;
    double s4 = 0.0;
    double sr = 0.0;
    double top = 0.0;
    for (const Complex& z : u) {
      const double sigma = std::norm(z);
      s2 += sigma;
      s4 += sigma * sigma;
      sr += std::pow(sigma, 0.5 * r2);
      top = std::max(top, sigma);
    }
    l2[m] = std::sqrt(dx * s2);
    l4[m] = std::sqrt(std::sqrt(dx * s4));
    lr2[m] = std::pow(dx * sr, 1.0 / r2);
    linf[m] = std::sqrt(top);
  }
};

struct SweepResult {
  std::vector<double> h_linf;
  std::vector<LevelNorms> iterates;     // n = 0..K
  std::vector<LevelNorms> differences;  // n = 0..K-1
  std::vector<std::vector<Field>> kept;  // [n][k] at keep_nodes, n = 0..K
};

// One backward sweep advancing K Picard levels together. Level n uses
// eta^{n-1} at the same node, which is already known when the sweep reaches it.
SweepResult sweep(const TrainModel& model, const Grid1D& grid, const TimeGrid& tg, std::size_t levels, double r2,
                  const std::vector<std::size_t>& keep_nodes, bool with_norms) {
  const Nonlinearity& nl = model.spec().nl;
  const std::size_t n = grid.size();
  const std::size_t nodes = tg.size();
  const double dt = tg.spacing();
  const double dx = grid.dx();
  const FreePropagator propagator(grid);
  const SpectralTransform& fft = propagator.transform();
  const std::vector<Complex> back = propagator.multiplier(-dt);

  SweepResult out;
  out.h_linf.assign(nodes, 0.0);
  out.iterates.resize(levels + 1);
  for (auto& lv : out.iterates) lv.resize(nodes);
  out.differences.resize(levels);
  for (auto& lv : out.differences) lv.resize(nodes);
  out.kept.assign(levels + 1, std::vector<Field>(keep_nodes.size(), Field(grid, 0.0)));

  std::vector<std::vector<Complex>> integral(levels + 1, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> source_prev(levels + 1, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> eta(levels + 1, std::vector<Complex>(n));
  std::vector<Complex> w(n), fw(n), h(n), component(n), forcing(n), diff(n);

  for (std::size_t m = nodes; m-- > 0;) {
    const double t = tg.node(m);
    std::fill(w.begin(), w.end(), Complex{});
    std::fill(h.begin(), h.end(), Complex{});
    for (std::size_t c = 0; c < model.component_count(); ++c) {
      model.sample_component(c, t, grid, component, {});
      for (std::size_t i = 0; i < n; ++i) {
        w[i] += component[i];
        h[i] -= nl.f(component[i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      fw[i] = nl.f(w[i]);
      h[i] += fw[i];
    }
    out.h_linf[m] = lp_norm(h, dx, kInfinity);

    for (std::size_t lv = 1; lv <= levels; ++lv) {
      const std::vector<Complex>& prev = eta[lv - 1];
      if (lv == 1) {
        forcing = h;
      } else {
        for (std::size_t i = 0; i < n; ++i) forcing[i] = nl.f(w[i] + prev[i]) - fw[i] + h[i];
      }
      fft.forward(forcing);
      std::vector<Complex>& acc = integral[lv];
      if (m + 1 < nodes) {
        const std::vector<Complex>& fp = source_prev[lv];
        for (std::size_t i = 0; i < n; ++i) acc[i] = back[i] * (acc[i] + 0.5 * dt * fp[i]) + 0.5 * dt * forcing[i];
      }
      source_prev[lv] = forcing;
      std::vector<Complex>& e = eta[lv];
      for (std::size_t i = 0; i < n; ++i) e[i] = Complex(0.0, -1.0) * acc[i];
      fft.inverse(e);
      bool finite = true;
      for (const Complex& z : e) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
      if (!finite) {
        std::ostringstream msg;
        msg << "Picard iterate " << lv << " became non-finite at t=" << t;
        throw Error(ErrorCode::NonFinite, msg.str());
      }
    }

    if (with_norms) {
      out.iterates[levels].record(m, eta[levels], dx, r2);
      for (std::size_t lv = 0; lv < levels; ++lv) {
        for (std::size_t i = 0; i < n; ++i) diff[i] = eta[lv + 1][i] - eta[lv][i];
        out.differences[lv].record(m, diff, dx, r2);
      }
    }
    for (std::size_t k = 0; k < keep_nodes.size(); ++k) {
      if (keep_nodes[k] != m) continue;
      for (std::size_t lv = 0; lv <= levels; ++lv) out.kept[lv][k] = Field(grid, t, eta[lv]);
    }
  }
  return out;
}

std::vector<double> tail_profile(const std::vector<double>& times, const LevelNorms& norms) {
  NormSeries series;
  series.times = times;
  series.pairs = default_pairs_d1();
  for (const auto& pair : series.pairs) {
    series.spatial.push_back(pair.r == 2.0 ? norms.l2 : (std::isinf(pair.r) ? norms.linf : norms.l4));
  }
  return strichartz_tail_profile(series);
}

double weighted_norm(const std::vector<double>& times, const std::vector<double>& lr2,
                     const std::vector<double>& strichartz, double c_hat) {
  double sup = 0.0;
  for (std::size_t m = 0; m < times.size(); ++m) {
    sup = std::max(sup, std::exp(c_hat * times[m]) * (lr2[m] + strichartz[m]));
  }
  return sup;
}

double max_l2(const std::vector<Field>& fields) {
  double out = 0.0;
  for (const Field& f : fields) out = std::max(out, lp_norm(f, 2.0));
  return out;
}

}  // namespace

IterateHistory picard_solve(const TrainSpec& spec, double T, const TimeGrid& time_grid, const PicardOptions& options,
                            std::shared_ptr<BoundStateCache> cache) {
  if (options.iterations < 2) throw Error(ErrorCode::InvalidArgument, "Picard iteration needs at least 2 iterates");
  if (std::abs(time_grid.horizon() - T) > 1e-12 * T) {
    throw Error(ErrorCode::InvalidArgument, "time grid horizon differs from T");
  }
  if (!cache) cache = std::make_shared<BoundStateCache>(spec.nl);

  IterateHistory hist;
  hist.time_grid = time_grid;
  hist.frame_velocity = std::isnan(options.frame_velocity) ? default_frame_velocity(spec) : options.frame_velocity;
  hist.r2 = 2.0 + spec.nl.alpha2();
  std::optional<Grid1D> grid = options.grid;
  const TrainModel model = frame_model(spec, hist.frame_velocity, T, grid, cache);
  hist.grid = *grid;
  for (std::size_t m = 0; m < time_grid.size(); ++m) hist.times.push_back(time_grid.node(m));

  std::vector<std::size_t> keep;
  for (const double ts : options.snapshot_times) {
    if (ts < 0.0 || ts > T) throw Error(ErrorCode::InvalidArgument, "snapshot time outside [0, T]");
    const auto m = static_cast<std::size_t>(std::llround(ts / time_grid.spacing()));
    keep.push_back(m);
    hist.snapshot_times.push_back(time_grid.node(m));
  }
  // Checkpoints for the quadrature test.
  std::vector<std::size_t> checks;
  for (std::size_t j = 0; j <= 8; ++j) checks.push_back(j * time_grid.intervals() / 8);
  std::vector<std::size_t> all_keep = keep;
  all_keep.insert(all_keep.end(), checks.begin(), checks.end());

  SweepResult run = sweep(model, *grid, time_grid, options.iterations, hist.r2, all_keep, true);
  hist.h_linf = run.h_linf;

  if (options.check_quadrature) {
    const std::vector<Field> coarse(run.kept[1].begin() + static_cast<std::ptrdiff_t>(keep.size()), run.kept[1].end());
    const double scale = max_l2(coarse);
    if (scale > 0.0) {
      const TimeGrid fine(T, 2 * time_grid.intervals());
      std::vector<std::size_t> fine_checks;
      for (const std::size_t m : checks) fine_checks.push_back(2 * m);
      const SweepResult refined = sweep(model, *grid, fine, 1, hist.r2, fine_checks, false);
      double change = 0.0;
      for (std::size_t j = 0; j < coarse.size(); ++j) {
        std::vector<Complex> d(coarse[j].values.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = refined.kept[1][j].values[i] - coarse[j].values[i];
        change = std::max(change, lp_norm(d, grid->dx(), 2.0));
      }
      hist.quadrature_change = change / scale;
      if (hist.quadrature_change > options.quadrature_tolerance) {
        std::ostringstream msg;
        msg << "halving the quadrature step changed the first iterate by " << hist.quadrature_change;
        throw Error(ErrorCode::QuadratureUnderResolved, msg.str());
      }
    }
  }

  try {
    FitOptions fit;
    fit.t_max = T;
    hist.h_fit = fit_exponential(hist.times, hist.h_linf, fit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateFit) throw;
  }
  if (!std::isnan(options.c_hat)) {
    hist.c_hat = options.c_hat;
  } else {
    hist.c_hat = hist.h_fit && hist.h_fit->rate > 0.0 ? 0.5 * hist.h_fit->rate : 0.0;
  }
  if (hist.h_fit) {
    hist.tail_estimate = hist.h_fit->rate > 0.0 ? hist.h_fit->C * std::exp(-hist.h_fit->rate * T) / hist.h_fit->rate
                                                : kInfinity;
  }

  hist.final_lr2 = run.iterates.back().lr2;
  for (const LevelNorms& lv : run.differences) {
    DifferenceNorms d;
    d.lr2 = lv.lr2;
    d.strichartz = tail_profile(hist.times, lv);
    d.weighted = weighted_norm(hist.times, d.lr2, d.strichartz, hist.c_hat);
    hist.differences.push_back(std::move(d));
  }
  for (auto& fields : run.kept) fields.resize(keep.size(), Field(*grid, 0.0));
  hist.snapshots = std::move(run.kept);
  return hist;
}

ContractionReport contraction_report(const IterateHistory& history) {
  if (history.iteration_count() < 2) throw Error(ErrorCode::InvalidArgument, "contraction report needs 3 iterates");
  ContractionReport rep;
  rep.exact_fixed_point = std::all_of(history.differences.begin(), history.differences.end(),
                                      [](const DifferenceNorms& d) { return d.weighted == 0.0; });
  if (!rep.exact_fixed_point) {
    for (std::size_t n = 0; n + 1 < history.differences.size(); ++n) {
      const double below = history.differences[n].weighted;
      const double above = history.differences[n + 1].weighted;
      rep.ratios.push_back(below > 0.0 ? above / below : (above > 0.0 ? kInfinity : 0.0));
    }
  }
  rep.limit_norm_profile = history.final_lr2;
  for (const double t : history.times) rep.weight_profile.push_back(std::exp(-history.c_hat * t));
  return rep;
}

CrossCheckReport cross_check(const IterateHistory& history, const std::vector<Field>& evolution_eta) {
  CrossCheckReport rep;
  if (history.snapshots.empty()) throw Error(ErrorCode::InvalidArgument, "history holds no snapshots");
  const std::vector<Field>& last = history.snapshots.back();
  for (const Field& e : evolution_eta) {
    if (!(e.grid == history.grid)) throw Error(ErrorCode::InvalidArgument, "evolution eta lives on another grid");
    std::size_t k = 0;
    while (k < last.size() && std::abs(last[k].t - e.t) > 1e-9) ++k;
    if (k == last.size()) continue;
    std::vector<Complex> d(e.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = last[k].values[i] - e.values[i];
    rep.times.push_back(e.t);
    rep.discrepancy.push_back(lp_norm(d, history.grid.dx(), 2.0));
    rep.max_discrepancy = std::max(rep.max_discrepancy, rep.discrepancy.back());
  }
  if (rep.times.empty()) throw Error(ErrorCode::InvalidArgument, "no shared sample times");
  return rep;
}

}  // namespace nlstrain
