#include "nlstrain/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlstrain/error.hpp"
#include "nlstrain/exponents.hpp"

namespace nlstrain {

SplitStepIntegrator::SplitStepIntegrator(const Grid1D& grid, Nonlinearity nl)
    : nl_(std::move(nl)), propagator_(grid) {}

void SplitStepIntegrator::advance(std::span<Complex> u, double dt, std::size_t steps, double t0) const {
  if (u.size() != grid().size()) throw Error(ErrorCode::InvalidArgument, "field does not match the integrator grid");
  if (steps == 0) return;
  const SpectralTransform& fft = propagator_.transform();
  const std::vector<Complex> half = propagator_.multiplier(0.5 * dt);
  const std::vector<Complex> full = propagator_.multiplier(dt);
  const std::size_t n = u.size();

  fft.forward(u);
  for (std::size_t i = 0; i < n; ++i) u[i] *= half[i];
  fft.inverse(u);
  for (std::size_t s = 0; s < steps; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sigma = std::norm(u[i]);
      total += sigma;
      u[i] *= std::polar(1.0, nl_.g(sigma) * dt);
    }
    if (!std::isfinite(total)) {
      std::ostringstream msg;
      msg << "field became non-finite at t=" << t0 + (static_cast<double>(s) + 0.5) * dt;
      throw Error(ErrorCode::NonFinite, msg.str());
    }
    fft.forward(u);
    const std::vector<Complex>& m = (s + 1 == steps) ? half : full;
    for (std::size_t i = 0; i < n; ++i) u[i] *= m[i];
    fft.inverse(u);
  }
}

double SplitStepIntegrator::mass(std::span<const Complex> u) const {
  double sum = 0.0;
  for (const Complex& v : u) sum += std::norm(v);
  return sum * grid().dx();
}

double SplitStepIntegrator::energy(std::span<const Complex> u) const {
  std::vector<Complex> hat(u.begin(), u.end());
  propagator_.transform().forward(hat);
  double kinetic = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double k = grid().wavenumber(i);
    kinetic += k * k * std::norm(hat[i]);
  }
  kinetic *= grid().dx() / static_cast<double>(hat.size());
  double potential = 0.0;
  for (const Complex& v : u) potential += nl_.G(std::norm(v));
  potential *= grid().dx();
  return 0.5 * kinetic - 0.5 * potential;
}

Field step(const Field& field, double dt, const Nonlinearity& nl) {
  if (dt == 0.0) throw Error(ErrorCode::InvalidArgument, "step needs dt != 0");
  Field out = field;
  SplitStepIntegrator(field.grid, nl).advance(out.values, dt, 1, field.t);
  out.t = field.t + dt;
  return out;
}

EvolveResult evolve(const Field& field, double t_target, double dt, const Nonlinearity& nl,
                    const EvolveOptions& options) {
  const double total = t_target - field.t;
  if (!(dt != 0.0 && total / dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "evolve needs (t_target - t) / dt > 0");
  }
  const SplitStepIntegrator integrator(field.grid, nl);
  EvolveResult result{field, {}};
  Field& u = result.field;
  ConservationReport& rep = result.report;

  auto record = [&]() {
    rep.times.push_back(u.t);
    rep.mass.push_back(integrator.mass(u.values));
    rep.energy.push_back(integrator.energy(u.values));
    const double tail = integrator.propagator().spectral_tail_fraction(u.values, options.tail_fraction);
    rep.max_tail_fraction = std::max(rep.max_tail_fraction, tail);
    const double m0 = rep.mass.front();
    const double e0 = rep.energy.front();
    rep.max_mass_drift = std::max(rep.max_mass_drift, m0 > 0.0 ? std::abs(rep.mass.back() - m0) / m0 : 0.0);
    const double e_scale = e0 != 0.0 ? std::abs(e0) : 1.0;
    rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(rep.energy.back() - e0) / e_scale);
  };

  record();
  auto whole = static_cast<std::size_t>(std::floor(total / dt * (1.0 + 1e-12)));
  const double remainder = total - static_cast<double>(whole) * dt;
  const std::size_t chunk = options.report_every > 0 ? options.report_every : std::max<std::size_t>(whole, 1);
  const double t_start = field.t;
  std::size_t done = 0;
  while (done < whole) {
    const std::size_t count = std::min(chunk, whole - done);
    integrator.advance(u.values, dt, count, u.t);
    done += count;
    u.t = t_start + static_cast<double>(done) * dt;
    if (done < whole || std::abs(remainder) <= 1e-12 * std::abs(total)) record();
  }
  if (std::abs(remainder) > 1e-12 * std::abs(total)) {
    integrator.advance(u.values, remainder, 1, u.t);
    u.t = t_target;
    record();
  }
  u.t = t_target;
  rep.resolved = rep.max_tail_fraction < options.tail_threshold;
  return result;
}

TrainModel frame_model(const TrainSpec& spec, double w, double T, std::optional<Grid1D>& grid,
                       std::shared_ptr<BoundStateCache> cache) {
  const TrainSpec frame_spec = boosted(spec, w);
  TrainModelOptions opts;
  if (frame_spec.kink) {
    if (frame_spec.kink->v0 != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "a kink train must be simulated in the kink's rest frame");
    }
    opts.closure = KinkClosure::Mirror;
    opts.domain_length = grid ? grid->length() : 1.0;
  }
  TrainModel model(frame_spec, std::move(cache), opts);
  if (!grid) {
    grid = auto_grid(model, T);
    if (frame_spec.kink) {
      opts.domain_length = grid->length();
      model = model.with_options(opts);
    }
  }
  model.check_grid(*grid, 0.0, T);
  return model;
}

namespace {

struct EtaNorms {
  double l2 = 0.0;
  double l4 = 0.0;
  double lr2 = 0.0;
  double linf = 0.0;
  double grad_l2 = 0.0;
};

// Norms of e = u - reference, with the gradient moved to the lab frame by the boost w.
EtaNorms eta_norms(std::span<const Complex> eta, std::span<const Complex> grad_eta, double w, double dx, double r2) {
  std::vector<Complex> lab_grad(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) lab_grad[i] = grad_eta[i] + Complex(0.0, 0.5 * w) * eta[i];
  return {lp_norm(eta, dx, 2.0), lp_norm(eta, dx, 4.0), lp_norm(eta, dx, r2), lp_norm(eta, dx, kInfinity),
          lp_norm(lab_grad, dx, 2.0)};
}

// Integrates u backward from T through the descending sample times, calling
// visit(index, u) at each of them.
template <class Visit>
void integrate_backward(const SplitStepIntegrator& integrator, std::vector<Complex>& u, double T, double dt,
                        const std::vector<double>& times, Visit visit) {
  double t = T;
  for (std::size_t k = times.size(); k-- > 0;) {
    const double gap = t - times[k];
    if (gap > 0.0) {
      const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(gap / std::abs(dt) - 1e-9)));
      integrator.advance(u, -gap / static_cast<double>(steps), steps, t);
    }
    t = times[k];
    visit(k, u);
  }
}

std::optional<DecayFit> try_fit(const std::vector<double>& times, const std::vector<double>& values,
                                const std::vector<double>& floor, double margin, const FitOptions& options) {
  try {
    return fit_exponential_above(times, values, floor, margin, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateFit) throw;
    return std::nullopt;
  }
}

}  // namespace

ConvergenceResult train_convergence_experiment(const TrainSpec& spec, double T, double dt,
                                               const ConvergenceOptions& options,
                                               std::shared_ptr<BoundStateCache> cache) {
  if (!(T > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "convergence experiment needs T, dt > 0");
  if (!cache) cache = std::make_shared<BoundStateCache>(spec.nl);
  ConvergenceResult result;
  result.T = T;
  result.dt = dt;
  result.r2 = 2.0 + spec.nl.alpha2();
  result.frame_velocity = std::isnan(options.frame_velocity) ? default_frame_velocity(spec) : options.frame_velocity;
  const double w = result.frame_velocity;

  std::optional<Grid1D> grid = options.grid;
  const TrainModel model = frame_model(spec, w, T, grid, cache);
  result.grid = *grid;

  std::vector<double> times = options.sample_times;
  if (times.empty()) {
    const auto count = static_cast<int>(std::llround(T / 0.02));
    for (int i = 0; i <= count; ++i) times.push_back(T * i / count);
  }
  times.insert(times.end(), options.keep_eta_at.begin(), options.keep_eta_at.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());
  if (times.front() < 0.0 || times.back() > T + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "sample times must lie in [0, T]");
  }
  const std::size_t count = times.size();
  ConvergenceSeries& s = result.series;
  s.times = times;
  for (auto* v : {&s.l2, &s.lr2, &s.linf, &s.grad_l2, &s.strichartz, &s.mass, &s.energy, &s.floor_l2, &s.floor_lr2,
                  &s.floor_linf, &s.floor_grad_l2}) {
    v->assign(count, 0.0);
  }
  std::vector<double> l4(count, 0.0);

  const SplitStepIntegrator integrator(*grid, spec.nl);
  std::vector<Complex> u = model.profile(T, *grid).values;
  const double dx = grid->dx();
  double mass_ref = 0.0;
  integrate_backward(integrator, u, T, dt, times, [&](std::size_t k, const std::vector<Complex>& field) {
    const auto [wv, dw] = model.profile_with_gradient(times[k], *grid);
    std::vector<Complex> eta(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) eta[i] = field[i] - wv.values[i];
    std::vector<Complex> grad = integrator.propagator().derivative(field);
    for (std::size_t i = 0; i < field.size(); ++i) grad[i] -= dw.values[i];
    const EtaNorms n = eta_norms(eta, grad, w, dx, result.r2);
    s.l2[k] = n.l2;
    l4[k] = n.l4;
    s.lr2[k] = n.lr2;
    s.linf[k] = n.linf;
    s.grad_l2[k] = n.grad_l2;
    s.mass[k] = integrator.mass(field);
    s.energy[k] = integrator.energy(field);
    if (k + 1 == count) mass_ref = s.mass[k];
    result.max_mass_drift = std::max(result.max_mass_drift, std::abs(s.mass[k] - mass_ref) / mass_ref);
    result.max_tail_fraction =
        std::max(result.max_tail_fraction, integrator.propagator().spectral_tail_fraction(field));
    for (const double keep : options.keep_eta_at) {
      if (std::abs(keep - times[k]) < 1e-12) result.kept_eta.emplace_back(*grid, times[k], eta);
    }
  });
  std::reverse(result.kept_eta.begin(), result.kept_eta.end());
  result.resolved = result.max_tail_fraction < 1e-8;

  NormSeries norm_series;
  norm_series.times = times;
  norm_series.pairs = default_pairs_d1();
  for (const auto& pair : norm_series.pairs) {
    norm_series.spatial.push_back(pair.r == 2.0 ? s.l2 : (std::isinf(pair.r) ? s.linf : l4));
  }
  s.strichartz = strichartz_tail_profile(norm_series);

  if (options.estimate_floor) {
    auto accumulate = [&](const TrainModel& alone, const Grid1D& g, double lab_velocity) {
      const SplitStepIntegrator solo(g, spec.nl);
      std::vector<Complex> v = alone.profile(T, g).values;
      integrate_backward(solo, v, T, dt, times, [&](std::size_t k, const std::vector<Complex>& field) {
        const auto [rv, dr] = alone.profile_with_gradient(times[k], g);
        std::vector<Complex> err(field.size());
        for (std::size_t i = 0; i < field.size(); ++i) err[i] = field[i] - rv.values[i];
        std::vector<Complex> grad = solo.propagator().derivative(field);
        for (std::size_t i = 0; i < field.size(); ++i) grad[i] -= dr.values[i];
        const EtaNorms n = eta_norms(err, grad, lab_velocity, g.dx(), result.r2);
        s.floor_l2[k] += n.l2;
        s.floor_lr2[k] += n.lr2;
        s.floor_linf[k] += n.linf;
        s.floor_grad_l2[k] += n.grad_l2;
      });
    };
    for (const SolitonParam& wave : spec.waves) {
      SolitonParam rest = wave;
      rest.v = 0.0;
      rest.x0 = 0.0;
      TrainSpec single = spec;
      single.waves = {rest};
      single.kink.reset();
      const TrainModel alone(single, cache);
      accumulate(alone, auto_grid(alone, T), wave.v);
    }
    if (spec.kink) {
      TrainSpec kink_only = boosted(spec, w);
      kink_only.waves.clear();
      const TrainModel alone = TrainModel(kink_only, cache, model.options());
      accumulate(alone, *grid, w);
    }
  }

  FitOptions fit_options;
  fit_options.t_min = options.fit_t_min;
  fit_options.t_max = options.fit_t_max_fraction * T;
  const double margin = options.estimate_floor ? options.floor_margin : 0.0;
  result.fit_l2 = try_fit(times, s.l2, s.floor_l2, margin, fit_options);
  result.fit_lr2 = try_fit(times, s.lr2, s.floor_lr2, margin, fit_options);
  result.fit_linf = try_fit(times, s.linf, s.floor_linf, margin, fit_options);
  result.fit_grad_l2 = try_fit(times, s.grad_l2, s.floor_grad_l2, margin, fit_options);
  return result;
}

}  // namespace nlstrain
