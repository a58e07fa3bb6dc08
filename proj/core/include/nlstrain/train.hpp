#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "nlstrain/analysis.hpp"
#include "nlstrain/bound_state.hpp"
#include "nlstrain/grid.hpp"
#include "nlstrain/kink.hpp"
#include "nlstrain/nonlinearity.hpp"

namespace nlstrain {

/// One travelling soliton e^{i(omega t + v x/2 - v^2 t/4 + gamma)} phi_omega(x - x0 - v t).
struct SolitonParam {
  double omega = 0.0;
  double v = 0.0;
  double gamma = 0.0;
  double x0 = 0.0;

  bool operator==(const SolitonParam&) const = default;
};

/// Boosted half-kink; its profile parameters follow from the nonlinearity.
struct KinkWave {
  double v0 = 0.0;
  double gamma0 = 0.0;
  double x0 = 0.0;

  bool operator==(const KinkWave&) const = default;
};

enum class PresetKind { A, B };

struct TrainSpec {
  Nonlinearity nl = Nonlinearity::pure_power(1.0);
  std::vector<SolitonParam> waves;
  std::optional<KinkWave> kink;
  double r0 = 0.0;
  double alpha1 = 0.0;
  std::optional<PresetKind> preset;  // frequency law behind tail_A1

  bool operator==(const TrainSpec&) const = default;
};

/// Fills r0 (choose_r0 for d = 1) and alpha1, and checks v_j > v0 when a kink is present.
TrainSpec make_train_spec(const Nonlinearity& nl, std::vector<SolitonParam> waves,
                          std::optional<KinkWave> kink = std::nullopt);

/// A: omega_j = 4^{-j}, v_j = 2^{j+1} vbar.
/// B: omega_j = 4^{-j}, v_j = 2^{j+1} h vbar for odd j and -2^{j+1} vbar for even j.
TrainSpec preset(PresetKind kind, int J, double vbar, double h_value, const Nonlinearity& nl);

/// Same train seen from a frame moving with velocity w: every velocity drops by w.
TrainSpec boosted(const TrainSpec& spec, double w);

/// Kink velocity when a kink is present, else the midpoint of the velocity range.
double default_frame_velocity(const TrainSpec& spec);

enum class DiagnosticsVariant { TrainOnly, WithKink };

struct TrainDiagnostics {
  double v_star = 0.0;
  double V_star = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double tail_A1 = 0.0;
};

TrainDiagnostics compute_diagnostics(const TrainSpec& spec, DiagnosticsVariant variant);

/// Ground states keyed by frequency, shared between waves and safe to use from several threads.
class BoundStateCache {
 public:
  explicit BoundStateCache(Nonlinearity nl, BoundStateOptions options = {});

  std::shared_ptr<const BoundState> get(double omega);
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }

 private:
  Nonlinearity nl_;
  BoundStateOptions options_;
  std::mutex mutex_;
  std::map<double, std::shared_ptr<const BoundState>> states_;
};

/// How a kink is made compatible with a periodic domain. Mirror glues a
/// reflected copy near the left edge so the field returns to 0 at -L/2; it
/// needs a kink at rest in the simulation frame.
enum class KinkClosure { None, Mirror };

struct TrainModelOptions {
  KinkClosure closure = KinkClosure::None;
  double domain_length = 0.0;  // required by Mirror
};

/// Evaluates the train W = sum_j R_j (+ K) and its pieces on grids.
/// Component 0 is the kink when present; solitons follow in spec order.
class TrainModel {
 public:
  TrainModel(TrainSpec spec, std::shared_ptr<BoundStateCache> cache = nullptr, TrainModelOptions options = {});

  const TrainSpec& spec() const noexcept { return spec_; }
  const TrainModelOptions& options() const noexcept { return options_; }
  /// Copy sharing the solved profiles, with different closure options.
  TrainModel with_options(TrainModelOptions options) const;
  std::size_t component_count() const noexcept { return solitons_.size() + (kink_ ? 1 : 0); }
  bool has_kink() const noexcept { return kink_ != nullptr; }
  const KinkProfile* kink_profile() const noexcept { return kink_.get(); }
  const BoundState& bound_state(std::size_t wave) const { return *solitons_.at(wave); }

  /// Distance beyond which a component is negligible: 30/sqrt(omega), or 30/min(sqrt(omega0), sqrt(h'(b))).
  double support_radius(std::size_t component) const;

  /// Component c and its x-derivative at every grid node.
  void sample_component(std::size_t c, double t, const Grid1D& grid, std::span<Complex> values,
                        std::span<Complex> gradient) const;

  Field profile(double t, const Grid1D& grid) const;
  /// {W, dW/dx}.
  std::pair<Field, Field> profile_with_gradient(double t, const Grid1D& grid) const;

  /// H = f(W) - sum_c f(R_c).
  Field source_term(double t, const Grid1D& grid) const;
  /// {H, dH/dx} with dH/dx assembled by the chain rule from analytic gradients.
  std::pair<Field, Field> source_with_gradient(double t, const Grid1D& grid) const;

  /// Throws GridTooSmall when some component would reach the periodic seam during [t0, t1].
  void check_grid(const Grid1D& grid, double t0, double t1) const;

 private:
  void validate_options() const;

  TrainSpec spec_;
  TrainModelOptions options_;
  std::vector<std::shared_ptr<const BoundState>> solitons_;
  std::shared_ptr<const KinkProfile> kink_;
};

/// Smallest grid holding every component over [0, T] and resolving its carrier
/// wavenumber |v|/2 plus 25 sqrt(omega) of profile bandwidth.
Grid1D auto_grid(const TrainModel& model, double T);

struct SourceDecayTable {
  std::vector<double> times;
  std::vector<double> linf;
  std::vector<double> lr2_conj;  // L^{r2'} with r2 = 2 + alpha2
  std::vector<double> l2;
  std::vector<double> grad_l2;
  std::optional<DecayFit> linf_fit;
  std::optional<DecayFit> lr2_conj_fit;
  std::optional<DecayFit> l2_fit;
  std::optional<DecayFit> grad_l2_fit;
};

/// Per-time norms of H and its gradient, plus exponential fits (samples below 1e-13 dropped).
SourceDecayTable source_decay_scan(const TrainModel& model, std::span<const double> times, const Grid1D& grid);

/// Candidate rates of the gradient bound: a min(1, 2a) v_* / 4 and (a/4) min(1, 2 alpha1) v_*.
std::pair<double, double> gradient_rate_candidates(double a, double alpha1, double v_star);

}  // namespace nlstrain
