#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "nlstrain/analysis.hpp"
#include "nlstrain/grid.hpp"
#include "nlstrain/train.hpp"

namespace nlstrain {

/// Uniform quadrature nodes t_m = m T / M, m = 0..M, with M >= 8.
class TimeGrid {
 public:
  TimeGrid(double T, std::size_t intervals);
  /// Smallest uniform grid with spacing at most dt.
  static TimeGrid with_spacing(double T, double dt);

  double horizon() const noexcept { return T_; }
  std::size_t intervals() const noexcept { return M_; }
  std::size_t size() const noexcept { return M_ + 1; }
  double spacing() const noexcept { return T_ / static_cast<double>(M_); }
  double node(std::size_t m) const noexcept { return spacing() * static_cast<double>(m); }

 private:
  double T_;
  std::size_t M_;
};

struct PicardOptions {
  std::size_t iterations = 4;
  double frame_velocity = std::numeric_limits<double>::quiet_NaN();  // NaN selects default_frame_velocity
  std::optional<Grid1D> grid;  // defaults to auto_grid in the frame
  double c_hat = std::numeric_limits<double>::quiet_NaN();  // NaN: half the fitted decay rate of ||H||_inf
  std::vector<double> snapshot_times;  // iterates kept as fields at the nearest nodes
  bool check_quadrature = true;
  double quadrature_tolerance = 1e-3;
};

/// Norms of successive differences eta^{n+1} - eta^n, n = 0..K-1, at every quadrature node.
struct DifferenceNorms {
  std::vector<double> lr2;
  std::vector<double> strichartz;  // discrete S([t, T]) over the default pairs
  double weighted = 0.0;           // sup_t e^{c_hat t} (lr2 + strichartz)
};

/// Iterates of eta = Phi(eta) from eta^0 = 0 in the simulation frame. Whole
/// fields are kept only at the snapshot nodes; every node keeps norms.
struct IterateHistory {
  TimeGrid time_grid{1.0, 8};
  Grid1D grid{1.0, 4};
  double frame_velocity = 0.0;
  double r2 = 0.0;
  double c_hat = 0.0;
  std::vector<double> times;
  std::vector<double> h_linf;                    // ||H(t)||_inf
  std::optional<DecayFit> h_fit;                 // fit of h_linf
  std::vector<double> final_lr2;                // ||eta^K(t)||_{L^{r2}}
  std::vector<DifferenceNorms> differences;     // [n] for eta^{n+1} - eta^n
  std::vector<std::vector<Field>> snapshots;    // [n][snapshot], n = 0..K
  std::vector<double> snapshot_times;
  double quadrature_change = 0.0;  // relative change of eta^1 under halving the spacing
  double tail_estimate = 0.0;      // int_T^inf of the fitted ||H||_inf

  std::size_t iteration_count() const noexcept { return differences.size(); }
};

/// Picard iteration of eta(t) = -i int_t^T e^{i(t-s)Delta}[f(W+eta) - f(W) + H](s) ds
/// with trapezoid quadrature and the exact spectral propagator.
///
/// All iterates advance together in one backward sweep over the nodes, so the
/// cost is one source evaluation per node. Throws QuadratureUnderResolved when
/// halving the spacing moves eta^1 by more than the tolerance (relative, L^2,
/// sup over nodes).
IterateHistory picard_solve(const TrainSpec& spec, double T, const TimeGrid& time_grid, const PicardOptions& options = {},
                            std::shared_ptr<BoundStateCache> cache = nullptr);

struct ContractionReport {
  std::vector<double> ratios;  // ||eta^{n+2} - eta^{n+1}||_w / ||eta^{n+1} - eta^n||_w
  bool exact_fixed_point = false;
  std::vector<double> limit_norm_profile;  // ||eta^K(t)||_{L^{r2}}
  std::vector<double> weight_profile;      // e^{-c_hat t}, for comparison
};

ContractionReport contraction_report(const IterateHistory& history);

struct CrossCheckReport {
  std::vector<double> times;
  std::vector<double> discrepancy;  // ||eta^K(t) - eta_evolution(t)||_{L^2}
  double max_discrepancy = 0.0;
};

/// Compares the last iterate with evolution snapshots taken in the same frame and grid.
CrossCheckReport cross_check(const IterateHistory& history, const std::vector<Field>& evolution_eta);

}  // namespace nlstrain
