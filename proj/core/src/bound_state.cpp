#include "nlstrain/bound_state.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "nlstrain/error.hpp"
#include "ode_support.hpp"

namespace nlstrain {

namespace {

using detail::State2;

constexpr double kRelTol = 1e-12;

struct RadialOde {
  const Nonlinearity* nl;
  double omega;
  int d;

  void operator()(const State2& y, State2& dy, double r) const {
    dy[0] = y[1];
    const double source = omega * y[0] - nl->f_real(y[0]);
    dy[1] = r == 0.0 ? source / d : source - (d - 1) * y[1] / r;
  }
};

enum class Outcome { Overshoot, Undershoot, Undecided };

Outcome classify(const RadialOde& ode, double p, double r_end) {
  auto stepper = detail::make_stepper(1e-15 * p, kRelTol);
  stepper.initialize(State2{p, 0.0}, 0.0, 1e-3 / std::sqrt(ode.omega));
  while (stepper.current_time() < r_end) {
    stepper.do_step(ode);
    const State2& s = stepper.current_state();
    if (s[0] < 0.0) return Outcome::Overshoot;
    if (s[1] > 0.0 || s[0] > 10.0 * p) return Outcome::Undershoot;
  }
  return Outcome::Undecided;
}

// Sixth-order central first derivative of `v` with v(-x) = parity * v(x).
std::vector<double> differentiate(std::span<const double> v, double h, double parity, std::size_t skip_end) {
  static constexpr double c[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  auto at = [&](std::ptrdiff_t i) { return i >= 0 ? v[static_cast<std::size_t>(i)] : parity * v[static_cast<std::size_t>(-i)]; };
  for (std::size_t i = 0; i + skip_end < n; ++i) {
    double acc = 0.0;
    const auto ii = static_cast<std::ptrdiff_t>(i);
    for (std::ptrdiff_t k = 1; k <= 3; ++k) acc += c[k - 1] * (at(ii + k) - at(ii - k));
    out[i] = acc / h;
  }
  return out;
}

}  // namespace

std::array<double, 2> decaying_mode(int d, double kappa, double r, double r_ref) {
  switch (d) {
    case 1: {
      const double psi = std::exp(-kappa * (r - r_ref));
      return {psi, -kappa * psi};
    }
    case 2: {
      if (kappa * r > 700.0) return {0.0, 0.0};
      const double norm = boost::math::cyl_bessel_k(0, kappa * r_ref);
      return {boost::math::cyl_bessel_k(0, kappa * r) / norm, -kappa * boost::math::cyl_bessel_k(1, kappa * r) / norm};
    }
    case 3: {
      const double psi = (r_ref / r) * std::exp(-kappa * (r - r_ref));
      return {psi, psi * (-kappa - 1.0 / r)};
    }
    default: throw Error(ErrorCode::InvalidArgument, "radial profiles support d = 1, 2, 3");
  }
}

RadialProfile::RadialProfile(int d, double r_max, double tail_rate, std::vector<double> values,
                             std::vector<double> derivatives)
    : d_(d),
      r_max_(r_max),
      h_(0.0),
      tail_rate_(tail_rate),
      values_(std::move(values)),
      derivatives_(std::move(derivatives)) {
  if (values_.size() < 2 || values_.size() != derivatives_.size()) {
    throw Error(ErrorCode::InvalidArgument, "radial profile needs matching value/derivative samples");
  }
  h_ = r_max_ / static_cast<double>(values_.size() - 1);
}

double RadialProfile::value(double r) const {
  if (r >= r_max_) return values_.back() * decaying_mode(d_, tail_rate_, r, r_max_)[0];
  const double pos = r / h_;
  const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * values_[i] + (t3 - 2.0 * t2 + t) * h_ * derivatives_[i] +
         (-2.0 * t3 + 3.0 * t2) * values_[i + 1] + (t3 - t2) * h_ * derivatives_[i + 1];
}

double RadialProfile::derivative(double r) const {
  if (r >= r_max_) return values_.back() * decaying_mode(d_, tail_rate_, r, r_max_)[1];
  const double pos = r / h_;
  const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t;
  return ((6.0 * t2 - 6.0 * t) * values_[i] + (-6.0 * t2 + 6.0 * t) * values_[i + 1]) / h_ +
         (3.0 * t2 - 4.0 * t + 1.0) * derivatives_[i] + (3.0 * t2 - 2.0 * t) * derivatives_[i + 1];
}

BoundState solve_bound_state(const Nonlinearity& nl, double omega, int d, const BoundStateOptions& options) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  if (d < 1 || d > 3) throw Error(ErrorCode::InvalidArgument, "bound states are computed for d = 1, 2, 3");
  const double kappa = std::sqrt(omega);
  const double r_max = options.r_max > 0.0 ? options.r_max : 30.0 / kappa;
  const RadialOde ode{&nl, omega, d};

  // Bracket: the first overshoot along a geometric sweep of phi(0).
  constexpr int kSweep = 96;
  const double p_lo = 1e-8;
  double under = 0.0;
  double over = 0.0;
  double exact = 0.0;
  double previous = 0.0;
  for (int i = 0; i < kSweep; ++i) {
    const double p = p_lo * std::pow(options.s_max / p_lo, static_cast<double>(i) / (kSweep - 1));
    const Outcome outcome = classify(ode, p, 2.0 * r_max);
    if (outcome == Outcome::Undecided) {
      exact = p;
      break;
    }
    if (outcome == Outcome::Overshoot) {
      if (previous > 0.0) {
        under = previous;
        over = p;
      }
      break;
    }
    previous = p;
  }
  if (exact == 0.0 && over == 0.0) {
    std::ostringstream msg;
    msg << "no undershoot/overshoot bracket for phi(0) in (0, " << options.s_max << "] at omega=" << omega;
    throw Error(ErrorCode::NoBoundState, msg.str());
  }
  if (exact == 0.0) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (under + over);
      if (mid <= under || mid >= over) break;
      const Outcome outcome = classify(ode, mid, 2.0 * r_max);
      if (outcome == Outcome::Undecided) {
        under = over = mid;
        break;
      }
      (outcome == Outcome::Overshoot ? over : under) = mid;
    }
    exact = under;
  }
  const double p = exact;

  // Forward leg from r = 0 until phi drops to 1e-3 p.
  double r_match = 0.0;
  {
    auto stepper = detail::make_stepper(1e-15 * p, kRelTol);
    stepper.initialize(State2{p, 0.0}, 0.0, 1e-3 / kappa);
    while (stepper.current_time() < r_max) {
      const double t_old = stepper.current_time();
      stepper.do_step(ode);
      if (stepper.current_state()[0] <= 1e-3 * p) {
        // Locate the crossing inside the last step.
        double lo = t_old;
        double hi = stepper.current_time();
        State2 y{};
        for (int k = 0; k < 60; ++k) {
          const double mid = 0.5 * (lo + hi);
          stepper.calc_state(mid, y);
          (y[0] > 1e-3 * p ? lo : hi) = mid;
        }
        r_match = hi;
        break;
      }
    }
  }
  if (!(r_match > 0.0) || r_match >= 0.9 * r_max) {
    throw Error(ErrorCode::NotConverged, "forward shooting leg did not reach the matching level inside r_max");
  }

  const std::vector<double> match_point{r_match};
  const State2 forward_match =
      detail::sample_states(ode, State2{p, 0.0}, 0.0, match_point, 1e-3 / kappa, 1e-15 * p, kRelTol)[0];

  // Backward leg from r_max seeded with the decaying linear mode; its amplitude
  // is tuned by secant iteration so the legs agree in value at r_match.
  const auto mode = decaying_mode(d, kappa, r_max, r_max);
  auto backward_at_match = [&](double amplitude) {
    const State2 seed{amplitude * mode[0], amplitude * mode[1]};
    return detail::sample_states(ode, seed, r_max, match_point, 1e-3 / kappa, 1e-30, kRelTol)[0];
  };
  const auto guess_mode = decaying_mode(d, kappa, r_match, r_max);
  double c0 = forward_match[0] / guess_mode[0];
  double c1 = c0 * (1.0 + 1e-6);
  double m0 = backward_at_match(c0)[0] - forward_match[0];
  double m1 = backward_at_match(c1)[0] - forward_match[0];
  for (int it = 0; it < 20 && m1 != m0 && std::abs(m1) > 1e-15 * forward_match[0]; ++it) {
    const double c2 = c1 - m1 * (c1 - c0) / (m1 - m0);
    c0 = c1;
    m0 = m1;
    c1 = c2;
    m1 = backward_at_match(c1)[0] - forward_match[0];
  }
  const double amplitude = c1;
  const State2 backward_match = backward_at_match(amplitude);

  // Sample both legs on a uniform grid, refining while the discrete residual is too large.
  const double base_spacing = options.spacing > 0.0 ? options.spacing : 0.02 / kappa;
  const State2 tail_seed{amplitude * mode[0], amplitude * mode[1]};
  const double jump = std::abs(backward_match[1] - forward_match[1]);
  double worst = 0.0;
  for (int level = 0; level < 4; ++level) {
    const double target_spacing = std::ldexp(base_spacing, -level);
    const auto intervals = static_cast<std::size_t>(std::ceil(r_max / target_spacing));
    const double h = r_max / static_cast<double>(intervals);
    std::vector<double> inner;
    std::vector<double> outer;
    for (std::size_t i = 0; i <= intervals; ++i) {
      const double r = h * static_cast<double>(i);
      (r <= r_match ? inner : outer).push_back(r);
    }
    std::reverse(outer.begin(), outer.end());
    const auto inner_states = detail::sample_states(ode, State2{p, 0.0}, 0.0, inner, 1e-3 / kappa, 1e-15 * p, kRelTol);
    const auto outer_states = detail::sample_states(ode, tail_seed, r_max, outer, 1e-3 / kappa, 1e-30, kRelTol);
    std::vector<double> values;
    std::vector<double> derivatives;
    values.reserve(intervals + 1);
    derivatives.reserve(intervals + 1);
    for (const auto& s : inner_states) {
      values.push_back(s[0]);
      derivatives.push_back(s[1]);
    }
    for (auto it = outer_states.rbegin(); it != outer_states.rend(); ++it) {
      values.push_back((*it)[0]);
      derivatives.push_back((*it)[1]);
    }

    BoundState state{nl, omega, d, RadialProfile(d, r_max, kappa, std::move(values), std::move(derivatives)), p, 0.0,
                     jump};
    for (const double r : bound_state_residuals(state)) state.residual = std::max(state.residual, std::abs(r));
    if (state.residual < options.tol) return state;
    worst = state.residual;
  }
  std::ostringstream msg;
  msg << "ODE residual " << worst << " exceeds tolerance " << options.tol << " at omega=" << omega;
  throw Error(ErrorCode::NotConverged, msg.str());
}

std::vector<double> bound_state_residuals(const BoundState& state) {
  const auto& prof = state.profile;
  const auto& phi = prof.values();
  const auto& dphi = prof.derivatives();
  constexpr std::size_t kSkip = 3;
  const auto second = differentiate(dphi, prof.spacing(), -1.0, kSkip);
  std::vector<double> out;
  out.reserve(phi.size() - kSkip);
  for (std::size_t i = 0; i + kSkip < phi.size(); ++i) {
    const double r = prof.node(i);
    const double radial = i == 0 ? (state.d - 1) * second[0] : (state.d - 1) * dphi[i] / r;
    out.push_back(second[i] + radial - state.omega * phi[i] + state.nl.f_real(phi[i]));
  }
  return out;
}

double closed_form_Q(double alpha, double x) {
  const double amplitude = std::pow(0.5 * (alpha + 2.0), 1.0 / alpha);
  const double c = std::cosh(0.5 * alpha * x);
  if (!std::isfinite(c)) return 0.0;
  return amplitude * std::pow(c, -2.0 / alpha);
}

double closed_form_Q_prime(double alpha, double x) { return -closed_form_Q(alpha, x) * std::tanh(0.5 * alpha * x); }

DecayCertificate certify_decay(const BoundState& state, double a) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "decay rate a must lie in (0, 1)");
  const auto& prof = state.profile;
  const double kappa = std::sqrt(state.omega);
  const double scale = std::pow(state.omega, -1.0 / state.nl.alpha1());
  DecayCertificate cert{a, 0.0, state.nl.alpha1(), 0.0};
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double r = prof.node(i);
    const double m = (std::abs(prof.values()[i]) + std::abs(prof.derivatives()[i]) / kappa) * scale *
                     std::exp(a * kappa * r);
    if (m > cert.D_a) {
      cert.D_a = m;
      argmax = i;
    }
  }
  cert.argmax = prof.node(argmax);
  if (argmax + 2 >= prof.size()) {
    std::ostringstream msg;
    msg << "decay envelope with a=" << a << " still growing at r_max=" << prof.r_max();
    throw Error(ErrorCode::CertificateUnbounded, msg.str());
  }
  return cert;
}

double predicted_bifurcation_exponent(const Nonlinearity& nl) {
  if (nl.kind() != NonlinearityKind::DoublePower) {
    throw Error(ErrorCode::InvalidArgument, "bifurcation exponent is defined for double-power nonlinearities");
  }
  return (nl.beta() / nl.alpha() - 1.0) / std::min(1.0, nl.alpha());
}

BifurcationReport bifurcation_scan(const Nonlinearity& nl, std::span<const double> omegas, int d) {
  BifurcationReport report;
  report.m_predicted = predicted_bifurcation_exponent(nl);
  if (omegas.size() < 2) throw Error(ErrorCode::InvalidArgument, "bifurcation scan needs at least two frequencies");
  const double alpha = nl.alpha();

  std::optional<BoundState> reference;
  if (d != 1) reference = solve_bound_state(Nonlinearity::pure_power(alpha), 1.0, d);
  auto Q = [&](double y) { return d == 1 ? closed_form_Q(alpha, y) : reference->profile.value(y); };

  for (const double omega : omegas) {
    const BoundState bs = solve_bound_state(nl, omega, d);
    const double kappa = std::sqrt(omega);
    const double scale = std::pow(omega, -1.0 / alpha);
    double sup = 0.0;
    for (std::size_t i = 0; i < bs.profile.size(); ++i) {
      const double r = bs.profile.node(i);
      sup = std::max(sup, std::abs(scale * bs.profile.values()[i] - Q(kappa * r)));
    }
    report.points.push_back({omega, bs.phi0, sup});
  }

  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& pt : report.points) {
    n += 1.0;
    sx += std::log(pt.omega);
    sy += std::log(pt.sup_xi);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& pt : report.points) {
    const double dx = std::log(pt.omega) - mx;
    const double dy = std::log(pt.sup_xi) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  report.m_fitted = sxy / sxx;
  report.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return report;
}

}  // namespace nlstrain
