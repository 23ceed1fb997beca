#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "glassmix/model.hpp"
#include "glassmix/stats.hpp"

namespace glassmix {

/// L_eps = {sigma : -H(sigma) > beta_c (1 - eps) N}, strict inequality.
struct DeepSet {
  double eps = 0.0;
  double threshold = 0.0;
  std::vector<State> members;
  std::vector<double> energies;

  std::size_t size() const { return members.size(); }
};

DeepSet deep_states(const DisorderInstance& inst, double eps);
DeepSet deep_states(std::span<const double> energy_table, int n, double eps);

/// G_{sigma0}(tau) = H(tau) - H(sigma0) c_p(d(sigma0, tau)/N).
double gaussian_component(const DisorderInstance& inst, State sigma0, State tau);

struct EventReport {
  double eps = 0.0;
  double delta = 0.0;
  int k = 0;
  std::size_t deep_count = 0;
  std::uint64_t ball_volume_2k = 0;
  bool part1 = false;  // |L_eps| > |B_{2k}|
  bool part2 = false;  // min over centers of min_{S_k} G >= part2_threshold
  double part2_threshold = 0.0;
  double min_g = 0.0;  // +inf when L_eps is empty
  std::vector<double> per_center_min_g;
  bool radius_in_range = false;  // 2k <= N/2, the range the ball-volume estimate assumes

  bool holds() const { return part1 && part2; }
};

/// Exact per-instance evaluation of the landscape event. Requires 1 <= k and 2k <= N.
EventReport check_event(const DisorderInstance& inst, double eps, double delta, int k);
EventReport check_event(std::span<const double> energy_table, int n, int p, double eps, double delta, int k);

using InstanceFactory = std::function<DisorderInstance(const ModelParams&, std::uint64_t seed)>;

DisorderInstance default_instance(const ModelParams& params, std::uint64_t seed);

/// One row per disorder sample; sample i uses derive_seed(master, kDisorderTag, i).
struct EventSample {
  std::uint64_t seed = 0;
  std::size_t deep_count = 0;
  bool part1 = false;
  bool part2 = false;
  double min_g = 0.0;
};

std::vector<EventSample> sample_events(const ModelParams& params, double eps, double delta, int k,
                                       std::size_t samples, std::uint64_t master_seed,
                                       const InstanceFactory& factory = default_instance);

struct ProportionEstimate {
  double estimate = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  Interval ci;
};

ProportionEstimate proportion(std::size_t successes, std::size_t trials);

/// Fraction of disorder samples on which the event holds, with a Wilson 95% interval.
ProportionEstimate event_probability(const ModelParams& params, double eps, double delta, int k,
                                     std::size_t samples, std::uint64_t master_seed,
                                     const InstanceFactory& factory = default_instance);

struct RatioEstimate {
  bool defined = false;  // false when every count is zero (0/0)
  double estimate = 0.0;
  Interval ci;
  double mean = 0.0;
  double second_moment = 0.0;
};

inline constexpr int kBootstrapResamples = 1000;

/// mean(X)^2 / mean(X^2) with a percentile bootstrap 95% interval.
RatioEstimate second_moment_from_counts(std::span<const double> counts, std::uint64_t seed);

/// E|L_eps|^2 / E[|L_eps|^2] over disorder samples.
RatioEstimate second_moment_ratio(const ModelParams& params, double eps, std::size_t samples,
                                  std::uint64_t master_seed, const InstanceFactory& factory = default_instance);

/// (1 - theta)^2 sm_ratio.
double paley_zygmund_lower(double theta, double sm_ratio);

struct UnionBound {
  double log_value = 0.0;
  double value = 0.0;  // exp(log_value); inf when not representable
  double log_prefactor = 0.0;
  double exponent = 0.0;  // -(N/2)[...]
};

/// Union bound on P(some sigma0 in L_eps has min_{S_r} G below threshold).
UnionBound union_bound_rhs(int n, int p, double eps, double delta, double r);

}  // namespace glassmix
