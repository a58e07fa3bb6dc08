#include "nlstrain/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlstrain/error.hpp"
#include "nlstrain/exponents.hpp"

namespace nlstrain {

namespace {

constexpr double kSupportFactor = 30.0;
constexpr double kBandwidthFactor = 25.0;

double japanese_bracket(double v) { return std::sqrt(1.0 + v * v); }

double kink_support(const KinkParams& p) {
  return kSupportFactor / std::min(std::sqrt(p.omega0), std::sqrt(p.h_prime_b));
}

// Position of the reflection point for the mirror closure.
double mirror_midpoint(const KinkProfile& kink, const KinkWave& wave, double length) {
  const double mirror_center = -0.5 * length + kink_support(kink.params());
  return 0.5 * (mirror_center + wave.x0);
}

}  // namespace

TrainSpec make_train_spec(const Nonlinearity& nl, std::vector<SolitonParam> waves, std::optional<KinkWave> kink) {
  for (const auto& w : waves) {
    if (!(w.omega > 0.0) || !std::isfinite(w.v)) {
      throw Error(ErrorCode::InvalidArgument, "soliton frequencies must be positive and velocities finite");
    }
    if (kink && !(w.v > kink->v0)) {
      throw Error(ErrorCode::InvalidArgument, "every soliton must move faster than the kink (v_j > v0)");
    }
  }
  TrainSpec spec;
  spec.nl = nl;
  spec.waves = std::move(waves);
  spec.kink = kink;
  spec.alpha1 = nl.alpha1();
  spec.r0 = choose_r0(1, nl.alpha1(), nl.alpha2());
  return spec;
}

TrainSpec preset(PresetKind kind, int J, double vbar, double h_value, const Nonlinearity& nl) {
  if (J < 1) throw Error(ErrorCode::InvalidArgument, "preset needs J >= 1");
  if (!(std::abs(vbar) > 0.0)) throw Error(ErrorCode::InvalidArgument, "preset needs |vbar| > 0");
  if (kind == PresetKind::B && !(h_value > 1.0)) throw Error(ErrorCode::InvalidArgument, "preset B needs h > 1");
  std::vector<SolitonParam> waves;
  for (int j = 1; j <= J; ++j) {
    SolitonParam w;
    w.omega = std::ldexp(1.0, -2 * j);
    const double scale = std::ldexp(1.0, j + 1);
    if (kind == PresetKind::A) {
      w.v = scale * vbar;
    } else {
      w.v = (j % 2 == 1) ? scale * h_value * vbar : -scale * vbar;
    }
    waves.push_back(w);
  }
  TrainSpec spec = make_train_spec(nl, std::move(waves));
  spec.preset = kind;
  return spec;
}

TrainSpec boosted(const TrainSpec& spec, double w) {
  TrainSpec out = spec;
  for (auto& wave : out.waves) wave.v -= w;
  if (out.kink) out.kink->v0 -= w;
  return out;
}

double default_frame_velocity(const TrainSpec& spec) {
  if (spec.kink) return spec.kink->v0;
  if (spec.waves.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(spec.waves.begin(), spec.waves.end(),
                                            [](const SolitonParam& a, const SolitonParam& b) { return a.v < b.v; });
  return 0.5 * (lo->v + hi->v);
}

TrainDiagnostics compute_diagnostics(const TrainSpec& spec, DiagnosticsVariant variant) {
  if (variant == DiagnosticsVariant::WithKink && !spec.kink) {
    throw Error(ErrorCode::InvalidArgument, "WithKink diagnostics need a train with a kink");
  }
  TrainDiagnostics d;
  d.v_star = kInfinity;
  std::vector<double> partners;
  for (const auto& w : spec.waves) partners.push_back(w.v);
  if (variant == DiagnosticsVariant::WithKink) partners.push_back(spec.kink->v0);
  for (std::size_t j = 0; j < spec.waves.size(); ++j) {
    for (std::size_t k = 0; k < partners.size(); ++k) {
      if (k == j) continue;
      d.v_star = std::min(d.v_star, std::sqrt(spec.waves[j].omega) * std::abs(partners[k] - spec.waves[j].v));
    }
  }

  const double e1 = 1.0 / spec.alpha1 - 1.0 / (2.0 * spec.r0);
  const double e2 = 1.0 / spec.alpha1;
  const double e4 = 1.0 / spec.alpha1 - 0.25;
  for (const auto& w : spec.waves) {
    d.A1 += std::pow(w.omega, e1);
    d.A2 += std::pow(w.omega, e2);
    d.V_star += japanese_bracket(w.v) * std::pow(w.omega, e4);
  }
  if (spec.preset) {
    const double q = std::pow(4.0, -e1);
    const auto J = static_cast<double>(spec.waves.size());
    d.tail_A1 = q < 1.0 ? std::pow(q, J + 1.0) / (1.0 - q) : kInfinity;
  }
  return d;
}

BoundStateCache::BoundStateCache(Nonlinearity nl, BoundStateOptions options)
    : nl_(std::move(nl)), options_(options) {}

std::shared_ptr<const BoundState> BoundStateCache::get(double omega) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = states_.find(omega);
  if (it != states_.end()) return it->second;
  auto state = std::make_shared<const BoundState>(solve_bound_state(nl_, omega, 1, options_));
  states_.emplace(omega, state);
  return state;
}

TrainModel::TrainModel(TrainSpec spec, std::shared_ptr<BoundStateCache> cache, TrainModelOptions options)
    : spec_(std::move(spec)), options_(options) {
  if (!cache) cache = std::make_shared<BoundStateCache>(spec_.nl);
  if (!(cache->nonlinearity() == spec_.nl)) {
    throw Error(ErrorCode::InvalidArgument, "bound-state cache was built for a different nonlinearity");
  }
  for (const auto& w : spec_.waves) solitons_.push_back(cache->get(w.omega));
  if (spec_.kink) {
    const KinkParams params = find_kink_params(spec_.nl);
    kink_ = std::make_shared<const KinkProfile>(solve_kink_profile(spec_.nl, params));
  }
  validate_options();
}

void TrainModel::validate_options() const {
  if (options_.closure != KinkClosure::Mirror) return;
  if (!spec_.kink) throw Error(ErrorCode::InvalidArgument, "mirror closure needs a kink");
  if (spec_.kink->v0 != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "mirror closure needs the kink at rest in the simulation frame");
  }
  if (!(options_.domain_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "mirror closure needs the domain length");
}

TrainModel TrainModel::with_options(TrainModelOptions options) const {
  TrainModel copy = *this;
  copy.options_ = options;
  copy.validate_options();
  return copy;
}

double TrainModel::support_radius(std::size_t component) const {
  if (kink_) {
    if (component == 0) return kink_support(kink_->params());
    --component;
  }
  return kSupportFactor / std::sqrt(spec_.waves.at(component).omega);
}

void TrainModel::sample_component(std::size_t c, double t, const Grid1D& grid, std::span<Complex> values,
                                  std::span<Complex> gradient) const {
  const std::size_t n = grid.size();
  const bool want_gradient = !gradient.empty();
  if (values.size() != n || (want_gradient && gradient.size() != n)) {
    throw Error(ErrorCode::InvalidArgument, "sample buffers must match the grid");
  }
  if (kink_ && c == 0) {
    const KinkWave& k = *spec_.kink;
    const double omega0 = kink_->params().omega0;
    const bool mirror = options_.closure == KinkClosure::Mirror;
    const double x_mid = mirror ? mirror_midpoint(*kink_, k, options_.domain_length) : 0.0;
    const double x_m = mirror ? -0.5 * options_.domain_length + kink_support(kink_->params()) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.x(i);
      double phi = 0.0;
      double dphi = 0.0;
      if (mirror && x < x_mid) {
        phi = kink_->value(x_m - x);
        dphi = -kink_->derivative(x_m - x);
      } else {
        const double y = x - k.x0 - k.v0 * t;
        phi = kink_->value(y);
        dphi = kink_->derivative(y);
      }
      const Complex phase = std::polar(1.0, omega0 * t + 0.5 * k.v0 * x - 0.25 * k.v0 * k.v0 * t + k.gamma0);
      values[i] = phase * phi;
      if (want_gradient) gradient[i] = phase * Complex(dphi, 0.5 * k.v0 * phi);
    }
    return;
  }
  const std::size_t j = kink_ ? c - 1 : c;
  const SolitonParam& w = spec_.waves.at(j);
  const RadialProfile& prof = solitons_[j]->profile;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double y = x - w.x0 - w.v * t;
    const double phi = prof.even_value(y);
    const Complex phase = std::polar(1.0, w.omega * t + 0.5 * w.v * x - 0.25 * w.v * w.v * t + w.gamma);
    values[i] = phase * phi;
    if (want_gradient) gradient[i] = phase * Complex(prof.even_derivative(y), 0.5 * w.v * phi);
  }
}

Field TrainModel::profile(double t, const Grid1D& grid) const {
  Field out(grid, t);
  std::vector<Complex> buffer(grid.size());
  for (std::size_t c = 0; c < component_count(); ++c) {
    sample_component(c, t, grid, buffer, {});
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] += buffer[i];
  }
  return out;
}

std::pair<Field, Field> TrainModel::profile_with_gradient(double t, const Grid1D& grid) const {
  Field w(grid, t);
  Field dw(grid, t);
  std::vector<Complex> v(grid.size());
  std::vector<Complex> g(grid.size());
  for (std::size_t c = 0; c < component_count(); ++c) {
    sample_component(c, t, grid, v, g);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w.values[i] += v[i];
      dw.values[i] += g[i];
    }
  }
  return {std::move(w), std::move(dw)};
}

Field TrainModel::source_term(double t, const Grid1D& grid) const {
  const std::size_t n = grid.size();
  std::vector<Complex> w(n);
  std::vector<Complex> sum_f(n);
  std::vector<Complex> v(n);
  for (std::size_t c = 0; c < component_count(); ++c) {
    sample_component(c, t, grid, v, {});
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += v[i];
      sum_f[i] += spec_.nl.f(v[i]);
    }
  }
  Field h(grid, t);
  for (std::size_t i = 0; i < n; ++i) h.values[i] = spec_.nl.f(w[i]) - sum_f[i];
  return h;
}

std::pair<Field, Field> TrainModel::source_with_gradient(double t, const Grid1D& grid) const {
  const std::size_t n = grid.size();
  const Nonlinearity& nl = spec_.nl;
  std::vector<Complex> w(n);
  std::vector<Complex> dw(n);
  std::vector<Complex> sum_f(n);
  std::vector<Complex> sum_df(n);
  std::vector<Complex> v(n);
  std::vector<Complex> g(n);
  for (std::size_t c = 0; c < component_count(); ++c) {
    sample_component(c, t, grid, v, g);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += v[i];
      dw[i] += g[i];
      sum_f[i] += nl.f(v[i]);
      sum_df[i] += nl.f_z(v[i]) * g[i] + nl.f_zbar(v[i]) * std::conj(g[i]);
    }
  }
  Field h(grid, t);
  Field dh(grid, t);
  for (std::size_t i = 0; i < n; ++i) {
    h.values[i] = nl.f(w[i]) - sum_f[i];
    dh.values[i] = nl.f_z(w[i]) * dw[i] + nl.f_zbar(w[i]) * std::conj(dw[i]) - sum_df[i];
  }
  return {std::move(h), std::move(dh)};
}

void TrainModel::check_grid(const Grid1D& grid, double t0, double t1) const {
  const double half = 0.5 * grid.length();
  double left = -half;
  if (kink_) {
    const KinkWave& k = *spec_.kink;
    const double s_k = kink_support(kink_->params());
    for (const double t : {t0, t1}) {
      const double center = k.x0 + k.v0 * t;
      if (options_.closure == KinkClosure::Mirror) {
        left = mirror_midpoint(*kink_, k, grid.length());
        if (center - left < s_k || half - center < s_k) {
          std::ostringstream msg;
          msg << "domain of length " << grid.length() << " cannot hold the mirrored kink (support " << s_k << ")";
          throw Error(ErrorCode::GridTooSmall, msg.str());
        }
      } else if (center - s_k < -half || center + s_k > half) {
        std::ostringstream msg;
        msg << "kink transition at x=" << center << " leaves the domain at t=" << t;
        throw Error(ErrorCode::GridTooSmall, msg.str());
      }
    }
  }
  for (std::size_t j = 0; j < spec_.waves.size(); ++j) {
    const SolitonParam& w = spec_.waves[j];
    const double radius = kSupportFactor / std::sqrt(w.omega);
    for (const double t : {t0, t1}) {
      const double center = w.x0 + w.v * t;
      if (center - radius < left || center + radius > half) {
        std::ostringstream msg;
        msg << "soliton " << j + 1 << " (support " << radius << ") at x=" << center << " reaches the seam of ["
            << left << ", " << half << ") at t=" << t;
        throw Error(ErrorCode::GridTooSmall, msg.str());
      }
    }
  }
}

Grid1D auto_grid(const TrainModel& model, double T) {
  const TrainSpec& spec = model.spec();
  double half = 0.0;
  double k_need = 0.0;
  double left_need = 0.0;
  for (std::size_t j = 0; j < spec.waves.size(); ++j) {
    const SolitonParam& w = spec.waves[j];
    const double radius = kSupportFactor / std::sqrt(w.omega);
    for (const double t : {0.0, T}) {
      const double center = w.x0 + w.v * t;
      half = std::max({half, center + radius, radius - center});
      left_need = std::max(left_need, radius - center);
    }
    k_need = std::max(k_need, 0.5 * std::abs(w.v) + kBandwidthFactor * std::sqrt(w.omega));
  }
  if (const KinkProfile* kink = model.kink_profile()) {
    const KinkWave& k = *spec.kink;
    const KinkParams& p = kink->params();
    const double s_k = kink_support(p);
    for (const double t : {0.0, T}) {
      const double center = k.x0 + k.v0 * t;
      half = std::max({half, center + s_k, s_k - center});
    }
    if (model.options().closure == KinkClosure::Mirror) {
      // The reflection point must stay s_K left of the kink and left of every soliton.
      half = std::max(half, 3.0 * s_k - k.x0);
      half = std::max(half, s_k + k.x0 + 2.0 * left_need);
    }
    k_need = std::max(k_need, 0.5 * std::abs(k.v0) + kBandwidthFactor * std::max(std::sqrt(p.omega0),
                                                                                  std::sqrt(p.h_prime_b)));
  }
  const double length = std::ceil(2.04 * half / 64.0) * 64.0;
  const auto nodes = next_power_of_two(static_cast<std::size_t>(std::ceil(length * k_need / std::numbers::pi)));
  return Grid1D(length, std::max<std::size_t>(nodes, 256));
}

SourceDecayTable source_decay_scan(const TrainModel& model, std::span<const double> times, const Grid1D& grid) {
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "source decay scan needs sample times");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::InvalidArgument, "scan times must increase");
  }
  model.check_grid(grid, times.front(), times.back());
  const double r2 = 2.0 + model.spec().nl.alpha2();
  const double r2_conj = conjugate(r2);
  SourceDecayTable table;
  for (const double t : times) {
    const auto [h, dh] = model.source_with_gradient(t, grid);
    table.times.push_back(t);
    table.linf.push_back(lp_norm(h, kInfinity));
    table.lr2_conj.push_back(lp_norm(h, r2_conj));
    table.l2.push_back(lp_norm(h, 2.0));
    table.grad_l2.push_back(lp_norm(dh, 2.0));
  }
  auto try_fit = [&](const std::vector<double>& values) -> std::optional<DecayFit> {
    try {
      return fit_exponential(table.times, values);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFit) throw;
      return std::nullopt;
    }
  };
  table.linf_fit = try_fit(table.linf);
  table.lr2_conj_fit = try_fit(table.lr2_conj);
  table.l2_fit = try_fit(table.l2);
  table.grad_l2_fit = try_fit(table.grad_l2);
  return table;
}

std::pair<double, double> gradient_rate_candidates(double a, double alpha1, double v_star) {
  return {a * std::min(1.0, 2.0 * a) * v_star / 4.0, 0.25 * a * std::min(1.0, 2.0 * alpha1) * v_star};
}

}  // namespace nlstrain
