#pragma once

#include <limits>
#include <string>
#include <vector>

namespace nlstrain {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exponent bookkeeping for one (d, alpha1, alpha2) configuration.
struct ExponentConfig {
  int d = 1;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double r0 = 0.0;
  double r2 = 0.0;
  double kink_alpha = 0.0;  // Hölder exponent of f' at the kink plateau, 0 when unused
  double epsilon = 0.0;     // r0 - max(1, d alpha1 / 2)
  double theta = 0.0;       // d (1/2 - 1/r2)
  double s = 0.0;           // interpolation exponent
};

/// r0 = max(1, d alpha1/2) + eps, eps the largest dyadic <= 1/16 for which the
/// three r0 inequalities hold (and r0 <= 2 when alpha1 < 4/d).
/// Throws ConditionViolated when alpha2/(2+alpha2) <= alpha1 fails.
double choose_r0(int d, double alpha1, double alpha2);

/// Hölder conjugate p/(p-1).
double conjugate(double p);

/// Builds a full config via choose_r0; s is the harmonic midpoint of its admissible interval.
ExponentConfig make_exponent_config(int d, double alpha1, double alpha2, double kink_alpha = 0.0);

/// Fills r2, theta, s for an externally supplied r0 (epsilon is derived).
ExponentConfig exponent_config_with_r0(int d, double alpha1, double alpha2, double r0, double kink_alpha = 0.0);

enum class Theorem { T1_1, T1_2, T1_3, T1_4 };

std::string to_string(Theorem theorem);

struct ConditionResult {
  std::string name;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct TheoremReport {
  Theorem theorem = Theorem::T1_1;
  std::vector<ConditionResult> conditions;

  bool pass() const;
  /// Name of the first failing condition, empty when all hold.
  std::string first_failure() const;
};

TheoremReport check_theorem_conditions(const ExponentConfig& cfg, Theorem theorem);

/// Direct evaluation of the three r0 inequalities (used by choose_r0 and its tests).
bool r0_inequalities_hold(int d, double alpha1, double alpha2, double r0);

struct AdmissiblePair {
  double q = kInfinity;
  double r = 2.0;

  bool operator==(const AdmissiblePair&) const = default;
};

/// Upper end of the Strichartz range: infinity for d = 1, alpha2 + 3 for d = 2,
/// 2d/(d-2) for d >= 3.
double strichartz_r_cap(int d, double alpha2);

/// Throws InvalidPair unless 2/q + d/r = d/2, 2 <= q, r <= infinity, and (d,q,r) != (2,2,inf).
void validate_pair(int d, const AdmissiblePair& pair);

/// Pair with the given spatial exponent r.
AdmissiblePair pair_for_r(int d, double r);

/// (inf, 2), the pair at the harmonic midpoint 1/r = (1/2 + 1/r_cap)/2, and the r = r_cap endpoint.
std::vector<AdmissiblePair> admissible_pairs(int d, double r_cap);

}  // namespace nlstrain
