#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace nlstrain {

using Complex = std::complex<double>;

enum class NonlinearityKind { DoublePower, SineExample, PurePower };

std::string to_string(NonlinearityKind kind);

/// Gauge-invariant nonlinearity f(u) = g(|u|^2) u.
///
/// The declared Hölder pair (alpha1, alpha2) and the constant c0 describe the
/// growth bound |s g'(s)| + |s^2 g''(s)| <= c0 (s^{alpha1/2} + s^{alpha2/2}).
/// Built-ins carry their natural declaration; `with_declared` replaces it, which
/// is how a misdeclared nonlinearity is fed to the assumption checkers.
class Nonlinearity {
 public:
  /// |u|^alpha u - |u|^beta u with 0 < alpha < beta.
  static Nonlinearity double_power(double alpha, double beta);
  /// |u|^alpha u.
  static Nonlinearity pure_power(double alpha);
  /// u - sin|u|/|u| u, declared with (alpha1, alpha2) = (2, 4).
  static Nonlinearity sine_example();

  Nonlinearity with_declared(double alpha1, double alpha2, double c0) const;

  NonlinearityKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }
  /// Declared F0 constant; 0 means "not declared", in which case the checker
  /// only reports the minimal feasible value.
  double c0() const noexcept { return c0_; }

  // g and its derivatives as functions of sigma = |u|^2 >= 0.
  double g(double sigma) const;
  double g_prime(double sigma) const;
  double g_second(double sigma) const;
  /// G(sigma) = int_0^sigma g.
  double G(double sigma) const;

  Complex f(Complex u) const { return g(std::norm(u)) * u; }
  /// Wirtinger derivatives: df = f_z du + f_zbar d(conj u).
  Complex f_z(Complex u) const;
  Complex f_zbar(Complex u) const;

  /// Restriction to real s; F is the antiderivative with F(0) = 0.
  double f_real(double s) const { return g(s * s) * s; }
  double f_real_prime(double s) const;
  double F(double s) const;

  bool operator==(const Nonlinearity&) const = default;

 private:
  Nonlinearity(NonlinearityKind kind, double alpha, double beta, double a1, double a2, double c0)
      : kind_(kind), alpha_(alpha), beta_(beta), alpha1_(a1), alpha2_(a2), c0_(c0) {}

  NonlinearityKind kind_;
  double alpha_;
  double beta_;
  double alpha1_;
  double alpha2_;
  double c0_;
};

/// Largest admissible exponent: infinity for d <= 2, 4/(d-2) otherwise.
double alpha_max(int d);

struct F0Report {
  bool pass = false;
  bool unbounded = false;
  double worst_ratio = 0.0;
  double minimal_c0 = 0.0;
  double worst_sample = 0.0;
};

/// 200 log-spaced points in [1e-8, 1e8].
std::vector<double> default_f0_samples();

/// Checks |s g'(s)| + |s^2 g''(s)| <= C0 (s^{a1/2} + s^{a2/2}) over the samples.
F0Report check_assumption_F0(const Nonlinearity& nl, std::span<const double> samples);

struct PerturbationBoundReport {
  double fitted_c = 0.0;
  bool stable = true;
  std::vector<double> rescale_factors;
  std::vector<double> rescaled_c;
};

/// Smallest C with |f(W+eta) - f(W)| <= C [|eta|(|W|^a1 + |W|^a2) + |eta|^{1+a1} + |eta|^{1+a2}]
/// over all sampled pairs; stability is re-checked with samples rescaled by 1/4 .. 4.
PerturbationBoundReport check_lemma2_bound(const Nonlinearity& nl, std::span<const Complex> w_samples,
                                           std::span<const Complex> eta_samples);

}  // namespace nlstrain
