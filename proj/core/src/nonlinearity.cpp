#include "nlstrain/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlstrain/error.hpp"

namespace nlstrain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this sigma the sine example switches to its Taylor series; the closed
// forms lose about |log10(sigma)| digits to cancellation.
constexpr double kSineSeriesCutoff = 0.04;

// sigma^p with sqrt/multiply shortcuts for the half-integer exponents of the built-ins.
double fast_pow(double sigma, double p) {
  const double twice = 2.0 * std::abs(p);
  if (twice == std::floor(twice) && twice <= 8.0) {
    const int whole = static_cast<int>(std::abs(p));
    double out = 1.0;
    for (int i = 0; i < whole; ++i) out *= sigma;
    if (static_cast<double>(whole) != std::abs(p)) out *= std::sqrt(sigma);
    return p < 0.0 ? 1.0 / out : out;
  }
  return std::pow(sigma, p);
}

double power_term(double sigma, double p) { return sigma == 0.0 ? (p == 0.0 ? 1.0 : 0.0) : fast_pow(sigma, p); }

// d/dsigma sigma^p = p sigma^{p-1}, evaluated with the 0 * inf = 0 convention
// left to the caller.
double power_term_prime(double sigma, double p) {
  if (p == 0.0) return 0.0;
  if (sigma == 0.0) return p > 1.0 ? 0.0 : (p == 1.0 ? 1.0 : kInf);
  return p * fast_pow(sigma, p - 1.0);
}

double power_term_second(double sigma, double p) {
  if (p == 0.0 || p == 1.0) return 0.0;
  if (sigma == 0.0) return p > 2.0 ? 0.0 : (p == 2.0 ? 2.0 : kInf);
  return p * (p - 1.0) * fast_pow(sigma, p - 2.0);
}

double rhs_f0(const Nonlinearity& nl, double s) {
  double value = std::pow(s, 0.5 * nl.alpha1());
  if (nl.alpha2() != nl.alpha1()) value += std::pow(s, 0.5 * nl.alpha2());
  return value;
}

}  // namespace

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::DoublePower: return "double_power";
    case NonlinearityKind::SineExample: return "sine_example";
    case NonlinearityKind::PurePower: return "pure_power";
  }
  return "unknown";
}

Nonlinearity Nonlinearity::double_power(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha)) {
    throw Error(ErrorCode::InvalidArgument, "double_power requires 0 < alpha < beta");
  }
  return {NonlinearityKind::DoublePower, alpha, beta, alpha, beta, 2.0};
}

Nonlinearity Nonlinearity::pure_power(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "pure_power requires alpha > 0");
  return {NonlinearityKind::PurePower, alpha, alpha, alpha, alpha, 1.0};
}

Nonlinearity Nonlinearity::sine_example() { return {NonlinearityKind::SineExample, 2.0, 4.0, 2.0, 4.0, 0.0}; }

Nonlinearity Nonlinearity::with_declared(double alpha1, double alpha2, double c0) const {
  if (!(alpha1 > 0.0) || alpha2 < alpha1 || c0 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "declared exponents need 0 < alpha1 <= alpha2 and c0 >= 0");
  }
  Nonlinearity copy = *this;
  copy.alpha1_ = alpha1;
  copy.alpha2_ = alpha2;
  copy.c0_ = c0;
  return copy;
}

double Nonlinearity::g(double sigma) const {
  switch (kind_) {
    case NonlinearityKind::PurePower: return power_term(sigma, 0.5 * alpha_);
    case NonlinearityKind::DoublePower: return power_term(sigma, 0.5 * alpha_) - power_term(sigma, 0.5 * beta_);
    case NonlinearityKind::SineExample: {
      if (sigma < kSineSeriesCutoff) {
        return sigma * (1.0 / 6.0 - sigma * (1.0 / 120.0 - sigma * (1.0 / 5040.0 - sigma / 362880.0)));
      }
      const double q = std::sqrt(sigma);
      return 1.0 - std::sin(q) / q;
    }
  }
  return 0.0;
}

double Nonlinearity::g_prime(double sigma) const {
  switch (kind_) {
    case NonlinearityKind::PurePower: return power_term_prime(sigma, 0.5 * alpha_);
    case NonlinearityKind::DoublePower:
      return power_term_prime(sigma, 0.5 * alpha_) - power_term_prime(sigma, 0.5 * beta_);
    case NonlinearityKind::SineExample: {
      if (sigma < kSineSeriesCutoff) {
        return 1.0 / 6.0 - sigma * (1.0 / 60.0 - sigma * (1.0 / 1680.0 - sigma * (1.0 / 90720.0)));
      }
      const double q = std::sqrt(sigma);
      return (std::sin(q) - q * std::cos(q)) / (2.0 * q * q * q);
    }
  }
  return 0.0;
}

double Nonlinearity::g_second(double sigma) const {
  switch (kind_) {
    case NonlinearityKind::PurePower: return power_term_second(sigma, 0.5 * alpha_);
    case NonlinearityKind::DoublePower:
      return power_term_second(sigma, 0.5 * alpha_) - power_term_second(sigma, 0.5 * beta_);
    case NonlinearityKind::SineExample: {
      if (sigma < kSineSeriesCutoff) {
        return -1.0 / 60.0 + sigma * (1.0 / 840.0 - sigma * (1.0 / 30240.0 - sigma / 1995840.0));
      }
      const double q = std::sqrt(sigma);
      const double q2 = q * q;
      return (q2 * std::sin(q) - 3.0 * std::sin(q) + 3.0 * q * std::cos(q)) / (4.0 * q2 * q2 * q);
    }
  }
  return 0.0;
}

double Nonlinearity::G(double sigma) const {
  switch (kind_) {
    case NonlinearityKind::PurePower: {
      const double p = 0.5 * alpha_ + 1.0;
      return power_term(sigma, p) / p;
    }
    case NonlinearityKind::DoublePower: {
      const double p = 0.5 * alpha_ + 1.0;
      const double q = 0.5 * beta_ + 1.0;
      return power_term(sigma, p) / p - power_term(sigma, q) / q;
    }
    case NonlinearityKind::SineExample: {
      if (sigma < kSineSeriesCutoff) {
        return sigma * sigma * (1.0 / 12.0 - sigma * (1.0 / 360.0 - sigma * (1.0 / 20160.0 - sigma / 1814400.0)));
      }
      return sigma + 2.0 * std::cos(std::sqrt(sigma)) - 2.0;
    }
  }
  return 0.0;
}

Complex Nonlinearity::f_z(Complex u) const {
  const double sigma = std::norm(u);
  if (sigma == 0.0) return {g(0.0), 0.0};
  return {g(sigma) + g_prime(sigma) * sigma, 0.0};
}

Complex Nonlinearity::f_zbar(Complex u) const {
  const double sigma = std::norm(u);
  if (sigma == 0.0) return {0.0, 0.0};
  return g_prime(sigma) * u * u;
}

double Nonlinearity::f_real_prime(double s) const {
  const double sigma = s * s;
  if (sigma == 0.0) return g(0.0);
  return g(sigma) + 2.0 * sigma * g_prime(sigma);
}

double Nonlinearity::F(double s) const { return 0.5 * G(s * s); }

double alpha_max(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  return d <= 2 ? kInf : 4.0 / (d - 2);
}

std::vector<double> default_f0_samples() {
  constexpr int kCount = 200;
  std::vector<double> samples(kCount);
  for (int i = 0; i < kCount; ++i) samples[i] = std::pow(10.0, -8.0 + 16.0 * i / (kCount - 1));
  return samples;
}

F0Report check_assumption_F0(const Nonlinearity& nl, std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample set");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  if (!(s.front() > 0.0)) throw Error(ErrorCode::InvalidArgument, "F0 samples must be positive");

  std::vector<double> ratio(s.size());
  F0Report report;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double lhs = std::abs(s[i] * nl.g_prime(s[i])) + std::abs(s[i] * s[i] * nl.g_second(s[i]));
    ratio[i] = lhs / rhs_f0(nl, s[i]);
    if (!(ratio[i] <= report.worst_ratio)) {
      report.worst_ratio = ratio[i];
      report.worst_sample = s[i];
    }
  }
  report.minimal_c0 = report.worst_ratio;

  // Growth across the outermost decade at either end signals a misdeclared pair.
  auto decade_max = [&](double lo, double hi) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= lo && s[i] <= hi) m = std::max(m, ratio[i]);
    }
    return m;
  };
  const double lo = s.front();
  const double hi = s.back();
  if (hi / lo >= 100.0) {
    const double low_end = decade_max(lo, 10.0 * lo);
    const double low_next = decade_max(10.0 * lo, 100.0 * lo);
    const double high_end = decade_max(hi / 10.0, hi);
    const double high_next = decade_max(hi / 100.0, hi / 10.0);
    report.unbounded = low_end > 1.5 * low_next || high_end > 1.5 * high_next;
  }
  report.unbounded = report.unbounded || !std::isfinite(report.worst_ratio);
  report.pass = !report.unbounded && (nl.c0() == 0.0 || report.minimal_c0 <= nl.c0());
  return report;
}

namespace {

double lemma2_fit(const Nonlinearity& nl, std::span<const Complex> w_samples, std::span<const Complex> eta_samples,
                  double scale) {
  const double a1 = nl.alpha1();
  const double a2 = nl.alpha2();
  double fitted = 0.0;
  for (const Complex w0 : w_samples) {
    const Complex w = scale * w0;
    const double aw = std::abs(w);
    const Complex fw = nl.f(w);
    for (const Complex e0 : eta_samples) {
      const Complex eta = scale * e0;
      const double ae = std::abs(eta);
      const double lhs = std::abs(nl.f(w + eta) - fw);
      const double rhs = ae * (std::pow(aw, a1) + std::pow(aw, a2)) + std::pow(ae, 1.0 + a1) + std::pow(ae, 1.0 + a2);
      if (rhs > 0.0) fitted = std::max(fitted, lhs / rhs);
    }
  }
  return fitted;
}

}  // namespace

PerturbationBoundReport check_lemma2_bound(const Nonlinearity& nl, std::span<const Complex> w_samples,
                                           std::span<const Complex> eta_samples) {
  PerturbationBoundReport report;
  report.fitted_c = lemma2_fit(nl, w_samples, eta_samples, 1.0);
  report.rescale_factors = {0.25, 0.5, 2.0, 4.0};
  for (const double factor : report.rescale_factors) {
    const double c = lemma2_fit(nl, w_samples, eta_samples, factor);
    report.rescaled_c.push_back(c);
    if (report.fitted_c == 0.0) {
      report.stable = report.stable && c == 0.0;
    } else {
      report.stable = report.stable && c <= 2.0 * report.fitted_c && c >= 0.5 * report.fitted_c;
    }
  }
  return report;
}

}  // namespace nlstrain
