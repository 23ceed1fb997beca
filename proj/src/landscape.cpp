#include "glassmix/landscape.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "glassmix/geometry.hpp"
#include "glassmix/parallel.hpp"
#include "glassmix/rng.hpp"
#include "glassmix/theory.hpp"

namespace glassmix {

namespace {

void check_eps(double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorKind::DomainError, "eps must lie in (0, 1)");
}

}  // namespace

DeepSet deep_states(std::span<const double> table, int n, double eps) {
  check_eps(eps);
  require(n >= 1 && n <= kMaxTableSpins, ErrorKind::CapacityExceeded, "deep_states requires N <= 20");
  require(table.size() == (std::size_t{1} << n), ErrorKind::DimensionMismatch, "energy table size is not 2^N");
  DeepSet set;
  set.eps = eps;
  set.threshold = kBetaC * (1.0 - eps) * n;
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (-table[s] > set.threshold) {
      set.members.push_back(static_cast<State>(s));
      set.energies.push_back(table[s]);
    }
  }
  return set;
}

DeepSet deep_states(const DisorderInstance& inst, double eps) {
  require(inst.n() <= kMaxTableSpins, ErrorKind::CapacityExceeded, "deep_states requires N <= 20");
  const auto table = energy_table(inst);
  return deep_states(table, inst.n(), eps);
}

double gaussian_component(const DisorderInstance& inst, State sigma0, State tau) {
  const int d = std::popcount(sigma0 ^ tau);
  return inst.energy(tau) - inst.energy(sigma0) * correlation(inst.p(), static_cast<double>(d) / inst.n());
}

EventReport check_event(std::span<const double> table, int n, int p, double eps, double delta, int k) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::DomainError, "delta must lie in (0, 1)");
  require(k >= 1 && 2 * k <= n, ErrorKind::DomainError, "check_event requires 1 <= k and 2k <= N");
  const DeepSet deep = deep_states(table, n, eps);
  const double c = correlation(p, static_cast<double>(k) / n);

  EventReport report;
  report.eps = eps;
  report.delta = delta;
  report.k = k;
  report.radius_in_range = 4 * k <= n;
  report.deep_count = deep.size();
  report.ball_volume_2k = ball_volume(n, 2 * k);
  report.part1 = deep.size() > report.ball_volume_2k;
  report.part2_threshold = -n * kBetaC * (1.0 - eps) * delta * (1.0 - c);
  report.min_g = std::numeric_limits<double>::infinity();
  report.per_center_min_g.reserve(deep.size());
  for (std::size_t i = 0; i < deep.size(); ++i) {
    const double h0 = deep.energies[i];
    double min_g = std::numeric_limits<double>::infinity();
    for (State tau : surface_states({deep.members[i], k, n})) min_g = std::min(min_g, table[tau] - h0 * c);
    report.per_center_min_g.push_back(min_g);
    report.min_g = std::min(report.min_g, min_g);
  }
  report.part2 = report.min_g >= report.part2_threshold;
  return report;
}

EventReport check_event(const DisorderInstance& inst, double eps, double delta, int k) {
  require(inst.n() <= kMaxTableSpins, ErrorKind::CapacityExceeded, "check_event requires N <= 20");
  const auto table = energy_table(inst);
  return check_event(table, inst.n(), inst.p(), eps, delta, k);
}

DisorderInstance default_instance(const ModelParams& params, std::uint64_t seed) {
  return DisorderInstance::sample(params, seed);
}

std::vector<EventSample> sample_events(const ModelParams& params, double eps, double delta, int k,
                                       std::size_t samples, std::uint64_t master_seed,
                                       const InstanceFactory& factory) {
  require(samples >= 1, ErrorKind::InvalidParams, "samples must be >= 1");
  params.validate();
  std::vector<EventSample> rows(samples);
  parallel_for(samples, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, kDisorderTag, i);
    const DisorderInstance inst = factory(params, seed);
    const auto report = check_event(inst, eps, delta, k);
    rows[i] = {seed, report.deep_count, report.part1, report.part2, report.min_g};
  });
  return rows;
}

ProportionEstimate proportion(std::size_t successes, std::size_t trials) {
  return {static_cast<double>(successes) / static_cast<double>(trials), successes, trials,
          wilson_interval(successes, trials)};
}

ProportionEstimate event_probability(const ModelParams& params, double eps, double delta, int k,
                                     std::size_t samples, std::uint64_t master_seed, const InstanceFactory& factory) {
  const auto rows = sample_events(params, eps, delta, k, samples, master_seed, factory);
  std::size_t hits = 0;
  for (const auto& row : rows) hits += (row.part1 && row.part2) ? 1 : 0;
  return proportion(hits, rows.size());
}

RatioEstimate second_moment_from_counts(std::span<const double> counts, std::uint64_t seed) {
  require(!counts.empty(), ErrorKind::InvalidParams, "no samples");
  auto ratio_of = [](double sum, double sum_sq, double m) {
    const double mean = sum / m;
    return mean * mean / (sum_sq / m);
  };
  double sum = 0.0, sum_sq = 0.0;
  for (double x : counts) {
    sum += x;
    sum_sq += x * x;
  }
  const double m = static_cast<double>(counts.size());
  RatioEstimate out;
  out.mean = sum / m;
  out.second_moment = sum_sq / m;
  if (sum_sq == 0.0) {
    out.estimate = std::numeric_limits<double>::quiet_NaN();
    out.ci = {out.estimate, out.estimate};
    return out;
  }
  out.defined = true;
  out.estimate = ratio_of(sum, sum_sq, m);

  PhiloxEngine rng(derive_seed(seed, kBootstrapTag, 0));
  std::vector<double> replicates;
  replicates.reserve(kBootstrapResamples);
  for (int b = 0; b < kBootstrapResamples; ++b) {
    double bs = 0.0, bss = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double x = counts[rng.below(counts.size())];
      bs += x;
      bss += x * x;
    }
    // A resample of all zeros carries no ratio; count it as 0 (lowest possible).
    replicates.push_back(bss == 0.0 ? 0.0 : ratio_of(bs, bss, m));
  }
  std::sort(replicates.begin(), replicates.end());
  auto quantile = [&](double q) {
    const double pos = q * (replicates.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, replicates.size() - 1);
    return replicates[lo] + (pos - lo) * (replicates[hi] - replicates[lo]);
  };
  out.ci = {quantile(0.025), quantile(0.975)};
  return out;
}

RatioEstimate second_moment_ratio(const ModelParams& params, double eps, std::size_t samples,
                                  std::uint64_t master_seed, const InstanceFactory& factory) {
  check_eps(eps);
  require(samples >= 1, ErrorKind::InvalidParams, "samples must be >= 1");
  params.validate();
  std::vector<double> counts(samples);
  parallel_for(samples, [&](std::size_t i) {
    const DisorderInstance inst = factory(params, derive_seed(master_seed, kDisorderTag, i));
    counts[i] = static_cast<double>(deep_states(inst, eps).size());
  });
  return second_moment_from_counts(counts, master_seed);
}

double paley_zygmund_lower(double theta, double sm_ratio) {
  require(theta >= 0.0 && theta < 1.0, ErrorKind::DomainError, "theta must lie in [0, 1)");
  require(sm_ratio > 0.0 && sm_ratio <= 1.0, ErrorKind::DomainError, "second-moment ratio must lie in (0, 1]");
  return (1.0 - theta) * (1.0 - theta) * sm_ratio;
}

UnionBound union_bound_rhs(int n, int p, double eps, double delta, double r) {
  require(n >= 1, ErrorKind::DomainError, "n must be >= 1");
  require(r > 0.0 && r < 0.5, ErrorKind::DomainError, "r must lie in (0, 1/2)");
  require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0, ErrorKind::DomainError,
          "eps and delta must lie in (0, 1)");
  const double c = correlation(p, r);
  const double bc2 = kBetaC * kBetaC;
  const double one_minus_eps = 1.0 - eps;
  UnionBound out;
  out.log_prefactor = 0.5 * std::log1p(c) - 0.5 * std::log1p(-c) -
                      std::log(2.0 * std::numbers::pi * n * bc2 * one_minus_eps * one_minus_eps * delta);
  const double bracket =
      bc2 * (one_minus_eps * one_minus_eps * delta * delta * (1.0 - c) / (1.0 + c) - 2.0 * eps * (1.0 - eps / 2.0)) -
      2.0 * binary_entropy(r);
  out.exponent = -0.5 * n * bracket;
  out.log_value = out.log_prefactor + out.exponent;
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace glassmix
