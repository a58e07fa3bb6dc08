#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nlstrain/analysis.hpp"
#include "nlstrain/grid.hpp"
#include "nlstrain/nonlinearity.hpp"
#include "nlstrain/spectral.hpp"
#include "nlstrain/train.hpp"

namespace nlstrain {

/// Strang splitting for i u_t + u_xx + f(u) = 0 on a periodic grid: half linear
/// step, exact nonlinear phase rotation u e^{i g(|u|^2) dt}, half linear step.
class SplitStepIntegrator {
 public:
  SplitStepIntegrator(const Grid1D& grid, Nonlinearity nl);

  const Grid1D& grid() const noexcept { return propagator_.grid(); }
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }
  const FreePropagator& propagator() const noexcept { return propagator_; }

  /// `steps` Strang steps of size dt (negative dt runs backward). Consecutive
  /// half linear steps are fused, so this costs two transforms per step.
  /// Throws NonFinite naming the first time at which a node blew up; t0 only labels it.
  void advance(std::span<Complex> u, double dt, std::size_t steps, double t0 = 0.0) const;

  /// int |u|^2.
  double mass(std::span<const Complex> u) const;
  /// int (|u_x|^2 - G(|u|^2)) / 2 with the spectral derivative.
  double energy(std::span<const Complex> u) const;

 private:
  Nonlinearity nl_;
  FreePropagator propagator_;
};

/// One Strang step of the field.
Field step(const Field& field, double dt, const Nonlinearity& nl);

struct ConservationReport {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  double max_mass_drift = 0.0;    // relative to the initial mass
  double max_energy_drift = 0.0;  // relative to |E(0)|, or absolute when E(0) = 0
  double max_tail_fraction = 0.0;
  bool resolved = true;  // tail fraction stayed below the threshold
};

struct EvolveOptions {
  std::size_t report_every = 0;  // steps between samples; 0 keeps only the endpoints
  double tail_fraction = 0.1;
  double tail_threshold = 1e-8;
};

struct EvolveResult {
  Field field;
  ConservationReport report;
};

/// Steps from field.t to t_target with step dt, closing with a fractional step if needed.
EvolveResult evolve(const Field& field, double t_target, double dt, const Nonlinearity& nl,
                    const EvolveOptions& options = {});

struct ConvergenceOptions {
  double frame_velocity = std::numeric_limits<double>::quiet_NaN();  // NaN selects default_frame_velocity
  std::optional<Grid1D> grid;  // defaults to auto_grid in the simulation frame
  std::vector<double> sample_times;  // defaults to every 0.02 on [0, T]
  bool estimate_floor = true;
  double floor_margin = 10.0;
  double fit_t_min = 0.0;
  double fit_t_max_fraction = 0.9;
  std::vector<double> keep_eta_at;  // frame-coordinate eta snapshots to retain
};

/// Per-sample norms of eta = u - W, in lab-frame values.
struct ConvergenceSeries {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> lr2;
  std::vector<double> linf;
  std::vector<double> grad_l2;
  std::vector<double> strichartz;  // sup over the default pairs of the norm on [t, T]
  std::vector<double> mass;
  std::vector<double> energy;  // simulation-frame energy
  std::vector<double> floor_l2;
  std::vector<double> floor_lr2;
  std::vector<double> floor_linf;
  std::vector<double> floor_grad_l2;
};

struct ConvergenceResult {
  double frame_velocity = 0.0;
  Grid1D grid{1.0, 4};
  double T = 0.0;
  double dt = 0.0;
  double r2 = 0.0;
  ConvergenceSeries series;
  std::optional<DecayFit> fit_l2;
  std::optional<DecayFit> fit_lr2;
  std::optional<DecayFit> fit_linf;
  std::optional<DecayFit> fit_grad_l2;
  double max_mass_drift = 0.0;
  double max_tail_fraction = 0.0;
  bool resolved = true;
  std::vector<Field> kept_eta;
};

/// Sets u(T) = W(T), integrates back to 0 in a Galilean frame and measures eta(t).
///
/// The integrator floor is estimated by evolving every component alone on its
/// own grid; fits only use samples exceeding floor_margin times that floor.
ConvergenceResult train_convergence_experiment(const TrainSpec& spec, double T, double dt,
                                               const ConvergenceOptions& options = {},
                                               std::shared_ptr<BoundStateCache> cache = nullptr);

/// Model of `spec` seen in the frame with velocity w, with the mirror closure for a kink.
TrainModel frame_model(const TrainSpec& spec, double w, double T, std::optional<Grid1D>& grid,
                       std::shared_ptr<BoundStateCache> cache);

}  // namespace nlstrain
