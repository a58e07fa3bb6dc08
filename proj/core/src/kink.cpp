#include "nlstrain/kink.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "nlstrain/error.hpp"
#include "ode_support.hpp"

namespace nlstrain {

namespace {

using detail::State2;

double root_in(const std::function<double(double)>& fn, double lo, double hi) {
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(fn, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                         iterations);
  return 0.5 * (bracket.first + bracket.second);
}

// First sign change of fn on the sample points, refined to machine precision.
std::optional<double> first_sign_change(const std::function<double(double)>& fn, const std::vector<double>& points,
                                        const std::function<bool(double)>& accept) {
  double prev_x = points.front();
  double prev = fn(prev_x);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double x = points[i];
    const double val = fn(x);
    if (prev == 0.0 && accept(prev_x)) return prev_x;
    if ((prev < 0.0) != (val < 0.0) && val != 0.0) {
      const double root = root_in(fn, prev_x, x);
      if (accept(root)) return root;
    }
    prev_x = x;
    prev = val;
  }
  return std::nullopt;
}

// omega0 phi^2 - 2 F(phi), written near the plateau as -2 int_0^eps h(b - tau) dtau
// so that it keeps relative accuracy as eps = b - phi -> 0.
class Radicand {
 public:
  Radicand(const Nonlinearity& nl, const KinkParams& params) : nl_(nl), p_(params) {
    switch_ = 1e-6 * p_.b;
    const double at_switch = plateau_quadrature(switch_);
    correction_ = (at_switch / (p_.h_prime_b * switch_ * switch_) - 1.0) / switch_;
  }

  double direct(double phi) const { return p_.omega0 * phi * phi - 2.0 * nl_.F(phi); }

  double near_plateau(double eps) const {
    if (eps <= switch_) return p_.h_prime_b * eps * eps * (1.0 + correction_ * eps);
    return plateau_quadrature(eps);
  }

 private:
  double h(double s) const { return p_.omega0 * s - nl_.f_real(s); }

  double plateau_quadrature(double eps) const {
    auto integrand = [this](double tau) { return h(p_.b - tau); };
    return -2.0 * boost::math::quadrature::gauss<double, 15>::integrate(integrand, 0.0, eps);
  }

  const Nonlinearity& nl_;
  KinkParams p_;
  double switch_ = 0.0;
  double correction_ = 0.0;
};

// Sixth-order central derivative; the last three nodes at each end are left at zero.
std::vector<double> central_derivative(const std::vector<double>& v, double h) {
  static constexpr double c[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 3; i + 3 < v.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= 3; ++k) acc += c[k - 1] * (v[i + k] - v[i - k]);
    out[i] = acc / h;
  }
  return out;
}

}  // namespace

KinkParams find_kink_params(const Nonlinearity& nl) {
  auto q = [&](double b) { return b * nl.f_real(b) - 2.0 * nl.F(b); };
  auto admissible = [&](double b) {
    const double omega0 = nl.f_real(b) / b;
    return omega0 > 0.0 && omega0 - nl.f_real_prime(b) > 0.0;
  };
  std::vector<double> scan(2000);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    scan[i] = 1e-4 * std::pow(1e8, static_cast<double>(i) / static_cast<double>(scan.size() - 1));
  }
  const auto root = first_sign_change(q, scan, admissible);
  if (!root) {
    throw Error(ErrorCode::NoKink, "b f(b) = 2 F(b) has no admissible root in [1e-4, 1e4] for " + to_string(nl.kind()));
  }

  KinkParams params;
  params.b = *root;
  params.omega0 = nl.f_real(params.b) / params.b;
  params.h_prime_b = params.omega0 - nl.f_real_prime(params.b);
  switch (nl.kind()) {
    case NonlinearityKind::SineExample: params.kink_alpha = 2.0; break;
    case NonlinearityKind::DoublePower: params.kink_alpha = std::abs(nl.f_real_prime(params.b)) < 1e-8 ? 1.0 : 0.0; break;
    case NonlinearityKind::PurePower: params.kink_alpha = 0.0; break;
  }

  auto h_over_s = [&](double s) { return params.omega0 - nl.g(s * s); };
  std::vector<double> interior(2000);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    interior[i] = params.b * static_cast<double>(i + 1) / static_cast<double>(interior.size() + 1);
  }
  const auto s_star = first_sign_change(h_over_s, interior, [](double) { return true; });
  if (!s_star) throw Error(ErrorCode::NoKink, "h has no interior root in (0, b)");
  params.s_star = *s_star;
  return params;
}

double kink_certification_rate(const KinkParams& params) {
  return 0.9 * std::min({params.omega0, params.h_prime_b, std::sqrt(params.omega0), std::sqrt(params.h_prime_b)});
}

KinkProfile::KinkProfile(Nonlinearity nl, KinkParams params, double half_width, std::vector<double> gap,
                         std::vector<double> derivatives)
    : nl_(std::move(nl)),
      params_(params),
      half_width_(half_width),
      h_(0.0),
      gap_(std::move(gap)),
      derivatives_(std::move(derivatives)) {
  if (gap_.size() < 5 || gap_.size() % 2 == 0 || gap_.size() != derivatives_.size()) {
    throw Error(ErrorCode::InvalidArgument, "kink profile needs an odd number (>= 5) of matching samples");
  }
  h_ = 2.0 * half_width_ / static_cast<double>(gap_.size() - 1);
}

double KinkProfile::side_gap(std::size_t i, bool negative_side) const noexcept {
  return negative_side == (i < center()) ? gap_[i] : params_.b - gap_[i];
}

double KinkProfile::side_slope(std::size_t i, bool negative_side) const noexcept {
  return negative_side ? -derivatives_[i] : derivatives_[i];
}

double KinkProfile::hermite(double s, bool derivative) const {
  const bool negative = s < 0.0;
  if (s <= -half_width_) {
    const double rate = std::sqrt(params_.h_prime_b);
    const double g = gap_.front() * std::exp(rate * (s + half_width_));
    return derivative ? rate * g : g;
  }
  if (s >= half_width_) {
    const double rate = std::sqrt(params_.omega0);
    const double g = gap_.back() * std::exp(-rate * (s - half_width_));
    return derivative ? -rate * g : g;
  }
  const double pos = (s + half_width_) / h_;
  const auto i = std::min(static_cast<std::size_t>(pos), gap_.size() - 2);
  const double t = pos - static_cast<double>(i);
  const double g0 = side_gap(i, negative);
  const double g1 = side_gap(i + 1, negative);
  const double m0 = side_slope(i, negative);
  const double m1 = side_slope(i + 1, negative);
  const double t2 = t * t;
  if (derivative) {
    return ((6.0 * t2 - 6.0 * t) * g0 + (-6.0 * t2 + 6.0 * t) * g1) / h_ + (3.0 * t2 - 4.0 * t + 1.0) * m0 +
           (3.0 * t2 - 2.0 * t) * m1;
  }
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * g0 + (t3 - 2.0 * t2 + t) * h_ * m0 + (-2.0 * t3 + 3.0 * t2) * g1 +
         (t3 - t2) * h_ * m1;
}

double KinkProfile::gap(double s) const { return hermite(s, false); }

double KinkProfile::value(double s) const {
  const double g = hermite(s, false);
  return s < 0.0 ? params_.b - g : g;
}

double KinkProfile::derivative(double s) const {
  const double slope = hermite(s, true);
  return s < 0.0 ? -slope : slope;
}

KinkProfile solve_kink_profile(const Nonlinearity& nl, const KinkParams& params, const KinkOptions& options) {
  if (!(params.b > 0.0 && params.omega0 > 0.0 && params.h_prime_b > 0.0 && params.s_star > 0.0 &&
        params.s_star < params.b)) {
    throw Error(ErrorCode::InvalidArgument, "kink parameters are not admissible");
  }
  const Radicand radicand(nl, params);
  const double scale = params.omega0 * params.b * params.b;
  for (int i = 1; i < 2000; ++i) {
    const double phi = params.b * i / 2000.0;
    const double p = radicand.direct(phi);
    if (p < -1e-12 * scale) {
      std::ostringstream msg;
      msg << "omega0 phi^2 - 2F(phi) = " << p << " < 0 at phi = " << phi << " inside (0, b)";
      throw Error(ErrorCode::QuadratureSingular, msg.str());
    }
  }

  const double slow = std::min(std::sqrt(params.omega0), std::sqrt(params.h_prime_b));
  const double fast = std::max(std::sqrt(params.omega0), std::sqrt(params.h_prime_b));
  const double width = options.half_width > 0.0 ? options.half_width : 40.0 / slow;
  const double target = options.spacing > 0.0 ? options.spacing : 0.02 / fast;
  const auto half_nodes = static_cast<std::size_t>(std::ceil(width / target));
  const double h = width / static_cast<double>(half_nodes);

  std::vector<double> forward_s(half_nodes + 1);
  std::vector<double> backward_s(half_nodes + 1);
  for (std::size_t j = 0; j <= half_nodes; ++j) {
    forward_s[j] = h * static_cast<double>(j);
    backward_s[j] = -h * static_cast<double>(j);
  }

  auto decreasing = [&](const State2& y, State2& dy, double) {
    dy[0] = -std::sqrt(std::max(radicand.direct(y[0]), 0.0));
    dy[1] = 0.0;
  };
  auto plateau = [&](const State2& y, State2& dy, double) {
    dy[0] = std::sqrt(std::max(radicand.near_plateau(y[0]), 0.0));
    dy[1] = 0.0;
  };
  const auto right = detail::sample_states(decreasing, State2{params.s_star, 0.0}, 0.0, forward_s, 1e-3 * h, 1e-300,
                                           1e-12);
  const auto left = detail::sample_states(plateau, State2{params.b - params.s_star, 0.0}, 0.0, backward_s, 1e-3 * h,
                                          1e-300, 1e-12);

  const std::size_t n = 2 * half_nodes + 1;
  std::vector<double> gap(n);
  std::vector<double> derivative(n);
  for (std::size_t j = 0; j <= half_nodes; ++j) {
    const std::size_t up = half_nodes + j;
    gap[up] = right[j][0];
    derivative[up] = -std::sqrt(std::max(radicand.direct(right[j][0]), 0.0));
    if (j == 0) continue;
    const std::size_t down = half_nodes - j;
    gap[down] = left[j][0];
    derivative[down] = -std::sqrt(std::max(radicand.near_plateau(left[j][0]), 0.0));
  }
  return KinkProfile(nl, params, width, std::move(gap), std::move(derivative));
}

std::vector<double> kink_first_integral_residuals(const KinkProfile& profile) {
  const auto& nl = profile.nonlinearity();
  const double omega0 = profile.params().omega0;
  std::vector<double> out(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double phi = profile.value_at_node(i);
    const double d = profile.derivatives()[i];
    out[i] = d * d - omega0 * phi * phi + 2.0 * nl.F(phi);
  }
  return out;
}

std::vector<double> kink_ode_residuals(const KinkProfile& profile) {
  const auto second = central_derivative(profile.derivatives(), profile.spacing());
  const auto& nl = profile.nonlinearity();
  std::vector<double> out;
  out.reserve(profile.size() - 6);
  for (std::size_t i = 3; i + 3 < profile.size(); ++i) {
    const double phi = profile.value_at_node(i);
    out.push_back(second[i] - profile.params().omega0 * phi + nl.f_real(phi));
  }
  return out;
}

KinkDecayCertificate certify_kink_decay(const KinkProfile& profile, double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay rate a must be positive");
  KinkDecayCertificate cert{a, 0.0, 0.0};
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double s = profile.node(i);
    const double m = (profile.gaps()[i] + std::abs(profile.derivatives()[i])) * std::exp(a * std::abs(s));
    if (m > cert.D_a) {
      cert.D_a = m;
      argmax = i;
    }
  }
  cert.argmax = profile.node(argmax);
  if (argmax < 2 || argmax + 2 >= profile.size()) {
    std::ostringstream msg;
    msg << "kink decay envelope with a=" << a << " still growing at s=" << cert.argmax;
    throw Error(ErrorCode::CertificateUnbounded, msg.str());
  }
  return cert;
}

}  // namespace nlstrain
