#include "glassmix/stats.hpp"

#include <algorithm>
#include <cmath>

#include "glassmix/error.hpp"

namespace glassmix {

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  require(trials > 0, ErrorKind::InvalidParams, "wilson_interval needs at least one trial");
  require(successes <= trials, ErrorKind::InvalidParams, "successes exceed trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanEstimate estimate_mean(std::span<const double> values) {
  require(!values.empty(), ErrorKind::InvalidParams, "estimate_mean needs data");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n), variance};
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() > 1, ErrorKind::DimensionMismatch, "correlation needs paired samples");
  const auto mx = estimate_mean(x).mean;
  const auto my = estimate_mean(y).mean;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace glassmix
