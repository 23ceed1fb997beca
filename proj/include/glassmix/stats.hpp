#pragma once

#include <cstddef>
#include <span>

namespace glassmix {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;  // unbiased sample variance
};

MeanEstimate estimate_mean(std::span<const double> values);

/// Pearson correlation of two equally long samples.
double sample_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace glassmix
