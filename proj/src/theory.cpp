#include "glassmix/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "glassmix/error.hpp"
#include "glassmix/geometry.hpp"
#include "glassmix/model.hpp"

namespace glassmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_unit_open(double value, const char* name) {
  require(value > 0.0 && value < 1.0, ErrorKind::DomainError, std::string(name) + " must lie in (0, 1)");
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_ball_volume(int n, int k) {
  if (n <= kMaxVolumeN) return std::log(static_cast<double>(ball_volume(n, k)));
  double top = kNegInf;
  for (int j = 0; j <= k; ++j) top = std::max(top, log_binomial(n, j));
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += std::exp(log_binomial(n, j) - top);
  return top + std::log(sum);
}

double constant_for(double eps, double delta) {
  const double x = x_param(eps, delta).value;
  return std::atanh(x) * (1.0 + x) / (2.0 * kBetaC * (1.0 - eps) * (1.0 - delta) * x);
}

}  // namespace

double phi(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

PhiBounds phi_bounds(double u) {
  require(u > 0.0, ErrorKind::DomainError, "phi_bounds requires u > 0");
  const double density_over_u = std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * u);
  return {(1.0 - 1.0 / (u * u)) * density_over_u, density_over_u};
}

double log_phi(double u) {
  if (u < 30.0) return std::log(phi(u));
  // Asymptotic Mills-ratio series; relative error below 1e-12 for u >= 30.
  const double inv2 = 1.0 / (u * u);
  const double series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2 + 105.0 * std::pow(inv2, 4);
  return -0.5 * u * u - std::log(u) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

DeepCount expected_deep_count(int n, double eps) {
  require(n >= 1, ErrorKind::DomainError, "n must be >= 1");
  check_unit_open(eps, "eps");
  const double u = std::sqrt(static_cast<double>(n)) * kBetaC * (1.0 - eps);
  DeepCount out;
  out.log_exact = n * std::numbers::ln2 + log_phi(u);
  out.exact = std::exp(out.log_exact);

  const double correction = 1.0 - 1.0 / (u * u);
  const double log_rest = -std::log(std::sqrt(2.0 * std::numbers::pi * n) * kBetaC * (1.0 - eps)) +
                          n * 0.5 * kBetaC * kBetaC * eps * (2.0 - eps);
  if (correction > 0.0) {
    out.log_lower_bound = std::log(correction) + log_rest;
    out.lower_bound = std::exp(out.log_lower_bound);
  } else {
    out.log_lower_bound = kNegInf;
    out.lower_bound = correction * std::exp(log_rest);
  }
  require(out.log_exact >= out.log_lower_bound - 1e-12, ErrorKind::NumericGate,
          "expected deep count fell below its analytic lower bound");
  return out;
}

Theta theta(int n, double eps, int k) {
  require(k >= 0 && 4 * k <= n, ErrorKind::DomainError, "theta requires 2k <= n/2");
  const double log_value = log_ball_volume(n, 2 * k) - expected_deep_count(n, eps).log_exact;
  return {std::exp(log_value), log_value};
}

XParam x_param(double eps, double delta) {
  check_unit_open(eps, "eps");
  check_unit_open(delta, "delta");
  const double x = 3.0 * eps / ((1.0 - eps) * (1.0 - eps) * delta * delta);
  return {x, x < 1.0};
}

double radius(double eps, double delta, int p) {
  require(p >= 1, ErrorKind::DomainError, "p must be >= 1");
  const XParam x = x_param(eps, delta);
  require(x.valid, ErrorKind::InvalidX, "x >= 1 (x = " + std::to_string(x.value) + ")");
  const double r = std::atanh(x.value) / p;
  if (r <= 0.5) {
    require(correlation(p, r) <= (1.0 - x.value) / (1.0 + x.value) * (1.0 + 1e-12), ErrorKind::NumericGate,
            "c_p(r) exceeds (1 - x)/(1 + x)");
  }
  return r;
}

int admissible_p(double eps, double delta) {
  const XParam x = x_param(eps, delta);
  require(x.valid, ErrorKind::InvalidX, "x >= 1 (x = " + std::to_string(x.value) + ")");
  const double entropy_budget = kBetaC * kBetaC * eps / 4.0;
  const double a = std::atanh(x.value);
  auto ok = [&](long long p) {
    const double r = a / static_cast<double>(p);
    return r < 0.25 && binary_entropy(r) <= entropy_budget;
  };
  // Both conditions are monotone in p: r decreases and gamma increases on [0, 1/2].
  long long hi = 2;
  while (!ok(hi)) {
    hi *= 2;
    require(hi < (1LL << 40), ErrorKind::NotAdmissible, "no admissible p below 2^40");
  }
  long long lo = hi / 2;  // ok(lo) is false unless lo < 2
  if (lo < 2) return static_cast<int>(hi);
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  require(hi <= std::numeric_limits<int>::max(), ErrorKind::NotAdmissible, "admissible p exceeds int range");
  return static_cast<int>(hi);
}

double beta_cutoff(double eps, double delta, int p) {
  const int p_min = admissible_p(eps, delta);
  require(p >= p_min, ErrorKind::NotAdmissible,
          "p = " + std::to_string(p) + " is below the admissible p = " + std::to_string(p_min));
  const double x = x_param(eps, delta).value;
  const double r = radius(eps, delta, p);
  return binary_entropy(r) * (1.0 + x) / (kBetaC * (1.0 - eps) * (1.0 - delta) * 2.0 * x);
}

double asymptotic_constant(double eps, double delta) {
  const XParam x = x_param(eps, delta);
  require(x.valid, ErrorKind::InvalidX, "x >= 1 (x = " + std::to_string(x.value) + ")");
  return constant_for(eps, delta);
}

ConstantOptimum optimize_constant(double eps) {
  check_unit_open(eps, "eps");
  ConstantOptimum out;
  out.delta_prescribed = std::cbrt(6.0 * eps);
  require(out.delta_prescribed < 1.0, ErrorKind::DomainError, "(6 eps)^{1/3} must be < 1");
  require(x_param(eps, out.delta_prescribed).valid, ErrorKind::DomainError, "x >= 1 at the prescribed delta");
  out.c_prescribed = constant_for(eps, out.delta_prescribed);

  // x < 1 exactly when delta > sqrt(3 eps) / (1 - eps); C blows up at both ends.
  double lo = std::sqrt(3.0 * eps) / (1.0 - eps);
  double hi = 1.0;
  const double span = hi - lo;
  lo += 1e-12 * span;
  hi -= 1e-12 * span;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = constant_for(eps, a);
  double fb = constant_for(eps, b);
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = constant_for(eps, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = constant_for(eps, b);
    }
  }
  out.delta_refined = fa < fb ? a : b;
  out.c_refined = std::min(fa, fb);
  if (out.c_refined > out.c_prescribed) {
    out.delta_refined = out.delta_prescribed;
    out.c_refined = out.c_prescribed;
  }
  return out;
}

ReferenceTemperatures reference_temperatures(int p) {
  require(p >= 2, ErrorKind::InvalidParams, "p must be >= 2");
  ReferenceTemperatures out;
  out.beta_sh = std::sqrt(2.0 * std::log(static_cast<double>(p)) / p);
  return out;
}

}  // namespace glassmix
