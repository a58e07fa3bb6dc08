#pragma once

#include <vector>

#include "nlstrain/nonlinearity.hpp"

namespace nlstrain {

/// Plateau data of a half-kink: h(s) = omega0 s - f(s) has h(b) = 0 and
/// int_0^b h = 0, with b the first positive such root.
struct KinkParams {
  double b = 0.0;
  double omega0 = 0.0;
  double h_prime_b = 0.0;
  double kink_alpha = 0.0;
  double s_star = 0.0;  // interior root of h in (0, b)
};

/// Solves b f(b) = 2 F(b) by bracketed root finding. Throws NoKink.
KinkParams find_kink_params(const Nonlinearity& nl);

/// 0.9 min(omega0, h'(b), sqrt(omega0), sqrt(h'(b))).
double kink_certification_rate(const KinkParams& params);

/// Monotone heteroclinic phi_K from b at -infinity to 0 at +infinity,
/// normalized by phi_K(0) = s_star.
///
/// Samples live on s_i = -S + i h. The distance to the nearer limit (b - phi
/// for s < 0, phi for s >= 0) is stored separately so that the exponentially
/// small tails keep their relative accuracy.
class KinkProfile {
 public:
  KinkProfile(Nonlinearity nl, KinkParams params, double half_width, std::vector<double> gap,
              std::vector<double> derivatives);

  const Nonlinearity& nonlinearity() const noexcept { return nl_; }
  const KinkParams& params() const noexcept { return params_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return gap_.size(); }
  double node(std::size_t i) const noexcept { return -half_width_ + static_cast<double>(i) * h_; }

  /// Index of the node at s = 0.
  std::size_t center() const noexcept { return (gap_.size() - 1) / 2; }
  double value_at_node(std::size_t i) const noexcept { return i < center() ? params_.b - gap_[i] : gap_[i]; }
  const std::vector<double>& gaps() const noexcept { return gap_; }
  const std::vector<double>& derivatives() const noexcept { return derivatives_; }

  /// phi_K, phi_K' and the limit gap at arbitrary s; beyond +-S the linear tails are used.
  double value(double s) const;
  double derivative(double s) const;
  double gap(double s) const;

 private:
  // Gap and its slope at node i, expressed on the requested side of s = 0.
  double side_gap(std::size_t i, bool negative_side) const noexcept;
  double side_slope(std::size_t i, bool negative_side) const noexcept;
  double hermite(double s, bool derivative) const;

  Nonlinearity nl_;
  KinkParams params_;
  double half_width_;
  double h_;
  std::vector<double> gap_;
  std::vector<double> derivatives_;
};

struct KinkOptions {
  double half_width = 0.0;  // 0 selects 40 / min(sqrt(omega0), sqrt(h'(b)))
  double spacing = 0.0;     // 0 selects 0.02 / max(sqrt(omega0), sqrt(h'(b)))
};

/// Integrates phi' = -sqrt(omega0 phi^2 - 2 F(phi)) from s_star in both
/// directions. Throws QuadratureSingular when the radicand is negative in (0, b).
KinkProfile solve_kink_profile(const Nonlinearity& nl, const KinkParams& params, const KinkOptions& options = {});

/// (phi')^2 - omega0 phi^2 + 2 F(phi) at every node.
std::vector<double> kink_first_integral_residuals(const KinkProfile& profile);

/// phi'' - omega0 phi + f(phi) at interior nodes, by sixth-order differences of phi'.
std::vector<double> kink_ode_residuals(const KinkProfile& profile);

struct KinkDecayCertificate {
  double a = 0.0;
  double D_a = 0.0;
  double argmax = 0.0;
};

/// D_a = max over nodes of (gap + |phi'|) e^{a |s|}. Throws CertificateUnbounded
/// when the maximand peaks at either end of the grid.
KinkDecayCertificate certify_kink_decay(const KinkProfile& profile, double a);

}  // namespace nlstrain
