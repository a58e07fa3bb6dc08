#pragma once

#include <array>
#include <span>
#include <vector>

#include "nlstrain/nonlinearity.hpp"

namespace nlstrain {

/// Samples of a radial function on r_i = i h, i = 0..N, with cubic Hermite
/// interpolation between nodes and the linear decaying mode beyond r_max.
class RadialProfile {
 public:
  RadialProfile(int d, double r_max, double tail_rate, std::vector<double> values, std::vector<double> derivatives);

  int dimension() const noexcept { return d_; }
  double r_max() const noexcept { return r_max_; }
  double spacing() const noexcept { return h_; }
  double tail_rate() const noexcept { return tail_rate_; }
  std::size_t size() const noexcept { return values_.size(); }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& derivatives() const noexcept { return derivatives_; }

  /// phi(r) for r >= 0.
  double value(double r) const;
  double derivative(double r) const;

  /// Even extension phi(|x|) and its derivative sign(x) phi'(|x|), for d = 1 use.
  double even_value(double x) const { return value(x < 0.0 ? -x : x); }
  double even_derivative(double x) const { return x < 0.0 ? -derivative(-x) : derivative(x); }

 private:
  int d_;
  double r_max_;
  double h_;
  double tail_rate_;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

/// Decaying solution of the linearized radial equation psi'' + (d-1)/r psi' = kappa^2 psi,
/// normalized to psi(r_ref) = 1. Returns {psi(r), psi'(r)}; supports d = 1, 2, 3.
std::array<double, 2> decaying_mode(int d, double kappa, double r, double r_ref);

struct BoundStateOptions {
  double r_max = 0.0;      // 0 selects 30 / sqrt(omega)
  double tol = 1e-8;       // ODE residual tolerance at grid nodes
  double s_max = 50.0;     // upper end of the phi(0) bracket search
  double spacing = 0.0;    // 0 selects 0.02 / sqrt(omega)
};

/// Positive radial ground state of phi'' + (d-1)/r phi' + f(phi) = omega phi.
struct BoundState {
  Nonlinearity nl;
  double omega = 0.0;
  int d = 1;
  RadialProfile profile;
  double phi0 = 0.0;
  double residual = 0.0;       // max ODE residual over interior nodes
  double junction_jump = 0.0;  // derivative mismatch where the two shooting legs meet
};

/// Bisection shooting on phi(0) followed by a two-sided match against the
/// decaying linear mode. Throws NoBoundState or NotConverged.
BoundState solve_bound_state(const Nonlinearity& nl, double omega, int d, const BoundStateOptions& options = {});

/// phi'' + (d-1)/r phi' - omega phi + f(phi) at every node except the last three.
std::vector<double> bound_state_residuals(const BoundState& state);

/// One-dimensional ground state of Q'' - Q + |Q|^alpha Q = 0.
double closed_form_Q(double alpha, double x);
double closed_form_Q_prime(double alpha, double x);

struct DecayCertificate {
  double a = 0.0;
  double D_a = 0.0;
  double alpha1 = 0.0;
  double argmax = 0.0;  // location of the extremal node
};

/// D_a = max over nodes of (|phi| + omega^{-1/2} |phi'|) omega^{-1/alpha1} e^{a sqrt(omega) r}.
/// Throws CertificateUnbounded when the maximand peaks at the end of the grid.
DecayCertificate certify_decay(const BoundState& state, double a);

struct BifurcationPoint {
  double omega = 0.0;
  double phi0 = 0.0;
  double sup_xi = 0.0;
};

struct BifurcationReport {
  std::vector<BifurcationPoint> points;
  double m_fitted = 0.0;
  double m_predicted = 0.0;
  double r_squared = 0.0;
};

/// (beta/alpha - 1) / min(1, alpha) for a double power.
double predicted_bifurcation_exponent(const Nonlinearity& nl);

/// Fits log sup |xi_omega| against log omega, where
/// xi_omega(y) = omega^{-1/alpha} phi_omega(omega^{-1/2} y) - Q(y).
BifurcationReport bifurcation_scan(const Nonlinearity& nl, std::span<const double> omegas, int d = 1);

}  // namespace nlstrain
