#pragma once

#include <cstdint>

namespace glassmix {

/// sqrt(2 ln 2): the REM freezing inverse temperature.
inline constexpr double kBetaC = 1.1774100225154747;

/// Upper Gaussian tail: integral_u^inf exp(-x^2/2) dx / sqrt(2 pi).
double phi(double u);

struct PhiBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Mills-ratio bracket for phi(u), u > 0.
PhiBounds phi_bounds(double u);

/// log phi(u); stays finite where phi(u) underflows.
double log_phi(double u);

struct DeepCount {
  double exact = 0.0;        // 2^n phi(sqrt(n) beta_c (1 - eps))
  double lower_bound = 0.0;  // explicit Mills-ratio lower bound; may be <= 0 (vacuous)
  double log_exact = 0.0;
  double log_lower_bound = 0.0;  // -inf when the bound is vacuous
};

/// Expected size of the deep set {sigma : -H(sigma) > beta_c (1 - eps) n}.
DeepCount expected_deep_count(int n, double eps);

struct Theta {
  double value = 0.0;
  double log_value = 0.0;
};

/// |B_{2k}| / E|L_eps| in log domain. Requires 2k <= n/2.
Theta theta(int n, double eps, int k);

struct XParam {
  double value = 0.0;
  bool valid = false;  // value < 1
};

/// 3 eps / ((1 - eps)^2 delta^2).
XParam x_param(double eps, double delta);

/// arctanh(x) / p; throws InvalidX unless x < 1.
double radius(double eps, double delta, int p);

/// Smallest p >= 2 with radius < 1/4 and gamma(radius) <= beta_c^2 eps / 4.
int admissible_p(double eps, double delta);

/// Inverse temperature above which the bottleneck exponent is positive:
/// gamma(r)(1 + x) / (beta_c (1 - eps)(1 - delta) 2x). Requires p >= admissible_p.
double beta_cutoff(double eps, double delta, int p);

/// Leading constant C in beta_cutoff ~ C ln p / p:
/// arctanh(x)(1 + x) / (2 beta_c (1 - eps)(1 - delta) x).
double asymptotic_constant(double eps, double delta);

struct ConstantOptimum {
  double delta_prescribed = 0.0;  // (6 eps)^{1/3}
  double c_prescribed = 0.0;
  double delta_refined = 0.0;  // golden-section minimiser over admissible delta
  double c_refined = 0.0;
};

ConstantOptimum optimize_constant(double eps);

struct ReferenceTemperatures {
  double beta_c = kBetaC;
  double beta_sh = 0.0;  // leading order sqrt(2 ln p / p); o_p(1) corrections omitted
  bool corrections_omitted = true;
};

ReferenceTemperatures reference_temperatures(int p);

}  // namespace glassmix
