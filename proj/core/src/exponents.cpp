#include "nlstrain/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlstrain/error.hpp"
#include "nlstrain/nonlinearity.hpp"

namespace nlstrain {

namespace {

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

ConditionResult make_condition(std::string name, std::string inequality, double lhs, double rhs, bool holds) {
  return {std::move(name), std::move(inequality), lhs, rhs, holds};
}

void append_r0_conditions(const ExponentConfig& cfg, std::vector<ConditionResult>& out) {
  const double lower = std::max(1.0, 0.5 * cfg.d * cfg.alpha1);
  out.push_back(make_condition("r0.lower", "max(1, d*alpha1/2) <= r0", lower, cfg.r0, lower <= cfg.r0));
  out.push_back(make_condition("r0.upper", "r0 < 2 + alpha1", cfg.r0, 2.0 + cfg.alpha1, cfg.r0 < 2.0 + cfg.alpha1));
  const double b = cfg.alpha1 / cfg.r0 + 1.0 / cfg.r2;
  out.push_back(make_condition("r0.holder", "1/2 <= alpha1/r0 + 1/r2", 0.5, b, 0.5 <= b));
  const double c = (cfg.alpha1 + 1.0) / cfg.r0 + 1.0 / cfg.r2;
  out.push_back(make_condition("r0.interpolation", "1 < (alpha1+1)/r0 + 1/r2", 1.0, c, 1.0 < c));
}

void append_pair_condition(const ExponentConfig& cfg, std::vector<ConditionResult>& out, const std::string& name) {
  const double lhs = cfg.alpha2 / (2.0 + cfg.alpha2);
  out.push_back(make_condition(name, "alpha2/(2+alpha2) <= alpha1", lhs, cfg.alpha1, lhs <= cfg.alpha1));
}

void append_dimension_one(const ExponentConfig& cfg, std::vector<ConditionResult>& out) {
  out.push_back(make_condition("d=1", "d == 1", cfg.d, 1.0, cfg.d == 1));
}

}  // namespace

double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

bool r0_inequalities_hold(int d, double alpha1, double alpha2, double r0) {
  const double r2 = 2.0 + alpha2;
  const bool a = std::max(1.0, 0.5 * d * alpha1) < r0 && r0 < 2.0 + alpha1;
  const bool b = 0.5 <= alpha1 / r0 + 1.0 / r2;
  const bool c = 1.0 < (alpha1 + 1.0) / r0 + 1.0 / r2;
  return a && b && c;
}

double choose_r0(int d, double alpha1, double alpha2) {
  if (!(alpha1 > 0.0) || alpha2 < alpha1 || !(alpha2 < alpha_max(d))) {
    throw Error(ErrorCode::InvalidArgument, "exponents need 0 < alpha1 <= alpha2 < alpha_max(d)");
  }
  if (alpha2 / (2.0 + alpha2) > alpha1) {
    throw Error(ErrorCode::ConditionViolated, "alpha2/(2+alpha2) <= alpha1 fails; use the gradient-level pathway");
  }
  const double base = std::max(1.0, 0.5 * d * alpha1);
  const bool cap_at_two = alpha1 < 4.0 / d;
  for (double eps = 1.0 / 16.0; eps > 1e-12; eps *= 0.5) {
    const double r0 = base + eps;
    if (cap_at_two && r0 > 2.0) continue;
    if (r0_inequalities_hold(d, alpha1, alpha2, r0)) return r0;
  }
  std::ostringstream msg;
  msg << "no dyadic epsilon satisfies the r0 inequalities for d=" << d << ", alpha1=" << alpha1
      << ", alpha2=" << alpha2;
  throw Error(ErrorCode::ConditionViolated, msg.str());
}

ExponentConfig exponent_config_with_r0(int d, double alpha1, double alpha2, double r0, double kink_alpha) {
  ExponentConfig cfg;
  cfg.d = d;
  cfg.alpha1 = alpha1;
  cfg.alpha2 = alpha2;
  cfg.r0 = r0;
  cfg.r2 = 2.0 + alpha2;
  cfg.kink_alpha = kink_alpha;
  cfg.epsilon = r0 - std::max(1.0, 0.5 * d * alpha1);
  cfg.theta = d * (0.5 - 1.0 / cfg.r2);
  // 1/s lies in (1/r2', min((1+alpha1)/r0, 1)); take the midpoint.
  const double inv_lo = 1.0 / conjugate(cfg.r2);
  const double inv_hi = std::min((1.0 + alpha1) / r0, 1.0);
  cfg.s = inv_hi > inv_lo ? 2.0 / (inv_lo + inv_hi) : std::nan("");
  return cfg;
}

ExponentConfig make_exponent_config(int d, double alpha1, double alpha2, double kink_alpha) {
  return exponent_config_with_r0(d, alpha1, alpha2, choose_r0(d, alpha1, alpha2), kink_alpha);
}

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::T1_1: return "T1_1";
    case Theorem::T1_2: return "T1_2";
    case Theorem::T1_3: return "T1_3";
    case Theorem::T1_4: return "T1_4";
  }
  return "unknown";
}

bool TheoremReport::pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.holds; });
}

std::string TheoremReport::first_failure() const {
  for (const auto& c : conditions) {
    if (!c.holds) return c.name;
  }
  return {};
}

TheoremReport check_theorem_conditions(const ExponentConfig& cfg, Theorem theorem) {
  TheoremReport report;
  report.theorem = theorem;
  auto& out = report.conditions;
  const double amax = alpha_max(cfg.d);
  switch (theorem) {
    case Theorem::T1_1: {
      out.push_back(make_condition("alpha.range", "0 < alpha1 <= alpha2 < alpha_max(d)", cfg.alpha2, amax,
                                   cfg.alpha1 > 0.0 && cfg.alpha1 <= cfg.alpha2 && cfg.alpha2 < amax));
      append_pair_condition(cfg, out, "alpha.pair");
      append_r0_conditions(cfg, out);
      out.push_back(make_condition("theta", "0 < theta < 1", cfg.theta, 1.0, cfg.theta > 0.0 && cfg.theta < 1.0));
      break;
    }
    case Theorem::T1_2: {
      const double bound = 4.0 / (cfg.d + 2.0);
      out.push_back(make_condition("alpha1.bound", "0 < alpha1 < 4/(d+2)", cfg.alpha1, bound,
                                   cfg.alpha1 > 0.0 && cfg.alpha1 < bound));
      break;
    }
    case Theorem::T1_3: {
      append_dimension_one(cfg, out);
      append_pair_condition(cfg, out, "alpha.pair");
      append_r0_conditions(cfg, out);
      const double lhs1 = cfg.kink_alpha / cfg.r0 + 1.0 / cfg.r2;
      out.push_back(make_condition("kink.holder", "1/2 <= kink_alpha/r0 + 1/r2", 0.5, lhs1, 0.5 <= lhs1));
      const double lhs2 = (cfg.kink_alpha + 1.0) / cfg.r0 + 1.0 / cfg.r2;
      out.push_back(make_condition("kink.interpolation", "1 < (kink_alpha+1)/r0 + 1/r2", 1.0, lhs2, 1.0 < lhs2));
      break;
    }
    case Theorem::T1_4: {
      append_dimension_one(cfg, out);
      out.push_back(make_condition("alpha1.bound", "0 < alpha1 < 4/3", cfg.alpha1, 4.0 / 3.0,
                                   cfg.alpha1 > 0.0 && cfg.alpha1 < 4.0 / 3.0));
      const double lhs = cfg.r0 * (cfg.alpha1 + 1.0);
      const double rhs = (cfg.kink_alpha + 1.0) * (cfg.alpha1 + 2.0);
      out.push_back(make_condition("kink.r0", "r0 (alpha1+1) < (kink_alpha+1)(alpha1+2)", lhs, rhs, lhs < rhs));
      break;
    }
  }
  return report;
}

double strichartz_r_cap(int d, double alpha2) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (d == 1) return kInfinity;
  if (d == 2) return alpha2 + 3.0;
  return 2.0 * d / (d - 2.0);
}

void validate_pair(int d, const AdmissiblePair& pair) {
  std::ostringstream msg;
  msg << "(d,q,r) = (" << d << "," << pair.q << "," << pair.r << ")";
  if (!(pair.q >= 2.0) || !(pair.r >= 2.0)) throw Error(ErrorCode::InvalidPair, msg.str() + " outside 2 <= q,r");
  if (d == 2 && pair.q == 2.0 && std::isinf(pair.r)) {
    throw Error(ErrorCode::InvalidPair, msg.str() + " is the forbidden endpoint");
  }
  const double lhs = 2.0 * inverse(pair.q) + d * inverse(pair.r);
  if (std::abs(lhs - 0.5 * d) > 1e-12 * std::max(1.0, 0.5 * d)) {
    throw Error(ErrorCode::InvalidPair, msg.str() + " violates 2/q + d/r = d/2");
  }
}

AdmissiblePair pair_for_r(int d, double r) {
  const double inv_q = 0.5 * d * (0.5 - inverse(r));
  AdmissiblePair pair{inv_q == 0.0 ? kInfinity : 1.0 / inv_q, r};
  validate_pair(d, pair);
  return pair;
}

std::vector<AdmissiblePair> admissible_pairs(int d, double r_cap) {
  const double limit = d == 2 ? kInfinity : strichartz_r_cap(d, 0.0);
  if (!(r_cap > 2.0) || r_cap > limit) {
    throw Error(ErrorCode::InvalidPair, "r_cap outside the admissible range for this dimension");
  }
  const double inv_mid = 0.5 * (0.5 + inverse(r_cap));
  return {pair_for_r(d, 2.0), pair_for_r(d, 1.0 / inv_mid), pair_for_r(d, r_cap)};
}

}  // namespace nlstrain
