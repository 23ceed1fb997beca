#include "glassmix/exact.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "glassmix/parallel.hpp"

namespace glassmix {

namespace {

constexpr double kTiny = 1e-300;

// One row-major square matrix.
struct Dense {
  std::size_t dim = 0;
  std::vector<double> data;
};

Dense multiply(const Dense& a, const Dense& b) {
  Dense c{a.dim, std::vector<double>(a.dim * a.dim)};
  const int d = static_cast<int>(a.dim);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, d, d, d, 1.0, a.data.data(), d, b.data.data(), d, 0.0,
              c.data.data(), d);
  return c;
}

struct WorstCase {
  double tv = 0.0;
  State start = 0;
};

WorstCase worst_tv(const Dense& m, const std::vector<double>& pi) {
  WorstCase worst{-1.0, 0};
  for (std::size_t s = 0; s < m.dim; ++s) {
    const double* row = m.data.data() + s * m.dim;
    double tv = 0.0;
    for (std::size_t t = 0; t < m.dim; ++t) tv += std::abs(row[t] - pi[t]);
    tv *= 0.5;
    if (tv > worst.tv) worst = {tv, static_cast<State>(s)};
  }
  return worst;
}

// TV from a point mass at time 0.
WorstCase worst_tv_identity(const std::vector<double>& pi) {
  WorstCase worst{-1.0, 0};
  for (std::size_t s = 0; s < pi.size(); ++s) {
    const double tv = 1.0 - pi[s];
    if (tv > worst.tv) worst = {tv, static_cast<State>(s)};
  }
  return worst;
}

void check_dimensions(const TransitionKernel& kernel, const GibbsDistribution& pi) {
  require(kernel.n_states() == pi.size(), ErrorKind::DimensionMismatch, "kernel and Gibbs sizes differ");
}

// mu_next = mu P for a single row distribution.
void evolve_row(const TransitionKernel& kernel, std::span<const double> mu, std::span<double> next) {
  const int n = kernel.n();
  const std::size_t states = kernel.n_states();
  for (std::size_t t = 0; t < states; ++t) {
    double acc = mu[t] * kernel.diagonal(static_cast<State>(t));
    for (int j = 0; j < n; ++j) {
      const std::size_t s = t ^ (std::size_t{1} << j);
      acc += mu[s] * kernel.neighbor(static_cast<State>(s), j);
    }
    next[t] = acc;
  }
}

double row_tv(std::span<const double> mu, const std::vector<double>& pi) {
  double tv = 0.0;
  for (std::size_t t = 0; t < pi.size(); ++t) tv += std::abs(mu[t] - pi[t]);
  return 0.5 * tv;
}

}  // namespace

TransitionKernel TransitionKernel::build(const DisorderInstance& inst, double beta, const SingleFlipRule& rule) {
  require(inst.n() <= kMaxKernelSpins, ErrorKind::CapacityExceeded, "build_kernel requires N <= 14");
  const auto table = energy_table(inst);
  return from_energies(table, inst.n(), beta, rule);
}

TransitionKernel TransitionKernel::from_energies(std::span<const double> energies, int n, double beta,
                                                 const SingleFlipRule& rule) {
  require(n >= 1 && n <= kMaxKernelSpins, ErrorKind::CapacityExceeded, "kernel requires 1 <= N <= 14");
  require(energies.size() == (std::size_t{1} << n), ErrorKind::DimensionMismatch, "energy table size is not 2^N");
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::InvalidParams, "beta must be finite and >= 0");
  TransitionKernel k;
  k.n_ = n;
  k.beta_ = beta;
  const std::size_t states = energies.size();
  k.neighbor_probs_.resize(states * n);
  k.diagonal_.resize(states);
  const double inv_n = 1.0 / n;
  for (std::size_t s = 0; s < states; ++s) {
    double leave = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::size_t t = s ^ (std::size_t{1} << j);
      const double prob = inv_n * rule.accept(beta, energies[t] - energies[s]);
      k.neighbor_probs_[s * n + j] = prob;
      leave += prob;
    }
    k.diagonal_[s] = 1.0 - leave;
  }
  return k;
}

double TransitionKernel::operator()(State from, State to) const {
  require(from < n_states() && to < n_states(), ErrorKind::IndexOutOfRange, "state outside kernel");
  if (from == to) return diagonal_[from];
  const State diff = from ^ to;
  if (std::popcount(diff) != 1) return 0.0;
  return neighbor(from, std::countr_zero(diff));
}

double TransitionKernel::max_row_sum_error() const {
  double worst = 0.0;
  for (std::size_t s = 0; s < n_states(); ++s) {
    double sum = diagonal_[s];
    for (double prob : neighbors(static_cast<State>(s))) sum += prob;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double TransitionKernel::min_entry() const {
  const double a = *std::min_element(diagonal_.begin(), diagonal_.end());
  const double b = *std::min_element(neighbor_probs_.begin(), neighbor_probs_.end());
  return std::min(a, b);
}

std::vector<double> TransitionKernel::dense() const {
  const std::size_t states = n_states();
  std::vector<double> m(states * states, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    m[s * states + s] = diagonal_[s];
    for (int j = 0; j < n_; ++j) m[s * states + (s ^ (std::size_t{1} << j))] = neighbor(static_cast<State>(s), j);
  }
  return m;
}

GibbsDistribution GibbsDistribution::from_energies(std::span<const double> energies, double beta) {
  require(!energies.empty(), ErrorKind::InvalidParams, "empty energy table");
  GibbsDistribution g;
  g.log_weights.resize(energies.size());
  for (std::size_t s = 0; s < energies.size(); ++s) g.log_weights[s] = -beta * energies[s];
  const double top = *std::max_element(g.log_weights.begin(), g.log_weights.end());
  double sum = 0.0;
  for (double lw : g.log_weights) sum += std::exp(lw - top);
  g.log_z = top + std::log(sum);
  g.probabilities.resize(energies.size());
  for (std::size_t s = 0; s < energies.size(); ++s) g.probabilities[s] = std::exp(g.log_weights[s] - g.log_z);
  return g;
}

double GibbsDistribution::min_log_probability() const {
  return *std::min_element(log_weights.begin(), log_weights.end()) - log_z;
}

double GibbsDistribution::log_mass(std::span<const State> states) const {
  if (states.empty()) return -std::numeric_limits<double>::infinity();
  double top = -std::numeric_limits<double>::infinity();
  for (State s : states) top = std::max(top, log_weights.at(s));
  double sum = 0.0;
  for (State s : states) sum += std::exp(log_weights[s] - top);
  return top + std::log(sum) - log_z;
}

GibbsDistribution gibbs_distribution(const DisorderInstance& inst, double beta) {
  require(inst.n() <= kMaxTableSpins, ErrorKind::CapacityExceeded, "gibbs_distribution requires N <= 20");
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::InvalidParams, "beta must be finite and >= 0");
  const auto table = energy_table(inst);
  return GibbsDistribution::from_energies(table, beta);
}

double verify_detailed_balance(const TransitionKernel& kernel, const GibbsDistribution& pi) {
  check_dimensions(kernel, pi);
  double worst = 0.0;
  for (std::size_t s = 0; s < kernel.n_states(); ++s) {
    for (int j = 0; j < kernel.n(); ++j) {
      const std::size_t t = s ^ (std::size_t{1} << j);
      if (t < s) continue;
      const double forward = pi.probabilities[s] * kernel.neighbor(static_cast<State>(s), j);
      const double backward = pi.probabilities[t] * kernel.neighbor(static_cast<State>(t), j);
      worst = std::max(worst, std::abs(forward - backward) / std::max(forward, kTiny));
    }
  }
  return worst;
}

double stationarity_residual(const TransitionKernel& kernel, const GibbsDistribution& pi) {
  check_dimensions(kernel, pi);
  std::vector<double> next(pi.size());
  evolve_row(kernel, pi.probabilities, next);
  double residual = 0.0;
  for (std::size_t t = 0; t < pi.size(); ++t) residual += std::abs(next[t] - pi.probabilities[t]);
  return residual;
}

std::vector<double> symmetrized_spectrum(const TransitionKernel& kernel, const GibbsDistribution& pi) {
  check_dimensions(kernel, pi);
  require(kernel.n() <= kMaxKernelSpins, ErrorKind::CapacityExceeded, "spectral_gap requires N <= 14");
  const double residual = verify_detailed_balance(kernel, pi);
  require(residual <= kReversibilityGate, ErrorKind::NotReversible,
          "detailed-balance residual " + std::to_string(residual) + " exceeds gate");

  const std::size_t states = kernel.n_states();
  std::vector<double> sym(states * states, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    sym[s * states + s] = kernel.diagonal(static_cast<State>(s));
    for (int j = 0; j < kernel.n(); ++j) {
      const std::size_t t = s ^ (std::size_t{1} << j);
      const double scale = std::exp(0.5 * (pi.log_weights[s] - pi.log_weights[t]));
      sym[s * states + t] = scale * kernel.neighbor(static_cast<State>(s), j);
    }
  }
  // Exact symmetry; for reversible kernels the two triangles agree to rounding.
  for (std::size_t s = 0; s < states; ++s) {
    for (int j = 0; j < kernel.n(); ++j) {
      const std::size_t t = s ^ (std::size_t{1} << j);
      if (t < s) continue;
      const double avg = 0.5 * (sym[s * states + t] + sym[t * states + s]);
      sym[s * states + t] = avg;
      sym[t * states + s] = avg;
    }
  }
  std::vector<double> eigenvalues(states);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'U', static_cast<lapack_int>(states), sym.data(),
                                         static_cast<lapack_int>(states), eigenvalues.data());
  require(info == 0, ErrorKind::NumericGate, "dsyevd failed with info " + std::to_string(info));
  return eigenvalues;
}

SpectralGap spectral_gap(const TransitionKernel& kernel, const GibbsDistribution& pi) {
  const auto eigenvalues = symmetrized_spectrum(kernel, pi);
  SpectralGap out;
  out.lambda_min = eigenvalues.front();
  out.lambda2 = eigenvalues.size() >= 2 ? eigenvalues[eigenvalues.size() - 2] : eigenvalues.front();
  out.gap = std::clamp(1.0 - out.lambda2, 0.0, 1.0);
  return out;
}

std::vector<double> tv_profile(const TransitionKernel& kernel, const GibbsDistribution& pi, std::uint64_t t_max) {
  check_dimensions(kernel, pi);
  const std::size_t states = kernel.n_states();
  std::vector<std::vector<double>> per_start(states);
  parallel_for(states, [&](std::size_t s) {
    std::vector<double> mu(states, 0.0), next(states);
    mu[s] = 1.0;
    auto& tv = per_start[s];
    tv.reserve(t_max + 1);
    tv.push_back(row_tv(mu, pi.probabilities));
    for (std::uint64_t t = 1; t <= t_max; ++t) {
      evolve_row(kernel, mu, next);
      mu.swap(next);
      tv.push_back(row_tv(mu, pi.probabilities));
    }
  });
  std::vector<double> d(t_max + 1, 0.0);
  for (const auto& tv : per_start) {
    for (std::uint64_t t = 0; t <= t_max; ++t) d[t] = std::max(d[t], tv[t]);
  }
  return d;
}

MixingResult mixing_time_by_evolution(const TransitionKernel& kernel, const GibbsDistribution& pi,
                                      std::uint64_t cap) {
  check_dimensions(kernel, pi);
  require(cap >= 1, ErrorKind::InvalidParams, "cap must be >= 1");
  require(kernel.n() <= kMaxMixingSpins, ErrorKind::CapacityExceeded, "mixing time requires N <= 12");
  const std::size_t states = kernel.n_states();
  struct StartResult {
    std::uint64_t t = 0;
    double tv = 0.0;
    bool reached = false;
  };
  std::vector<StartResult> results(states);
  parallel_for(states, [&](std::size_t s) {
    std::vector<double> mu(states, 0.0), next(states);
    mu[s] = 1.0;
    for (std::uint64_t t = 1; t <= cap; ++t) {
      evolve_row(kernel, mu, next);
      mu.swap(next);
      const double tv = row_tv(mu, pi.probabilities);
      results[s] = {t, tv, tv <= 0.25};
      // TV to stationarity is non-increasing from any fixed start.
      if (tv <= 0.25) break;
    }
  });
  MixingResult out;
  for (std::size_t s = 0; s < states; ++s) {
    const auto& r = results[s];
    if (!r.reached) {
      if (out.kind != MixingKind::CappedLowerBound || r.tv > out.tv_at_t) {
        out = {MixingKind::CappedLowerBound, cap, static_cast<State>(s), r.tv};
      }
    } else if (out.kind == MixingKind::Exact && (r.t > out.t_mix || (r.t == out.t_mix && r.tv > out.tv_at_t))) {
      out = {MixingKind::Exact, r.t, static_cast<State>(s), r.tv};
    }
  }
  return out;
}

MixingResult exact_mixing_time(const TransitionKernel& kernel, const GibbsDistribution& pi, std::uint64_t cap) {
  check_dimensions(kernel, pi);
  require(cap >= 1, ErrorKind::InvalidParams, "cap must be >= 1");
  require(kernel.n() <= kMaxMixingSpins, ErrorKind::CapacityExceeded, "mixing time requires N <= 12");
  const std::size_t states = kernel.n_states();
  const auto& target = pi.probabilities;

  // powers[j] = P^(2^j)
  std::vector<Dense> powers;
  powers.push_back({states, kernel.dense()});
  const int top_bit = std::bit_width(cap) - 1;

  std::uint64_t upper = cap;  // smallest known time with d <= 1/4 (or the cap)
  bool below_at_upper = false;
  for (int j = 0; j <= top_bit; ++j) {
    if (j > 0) powers.push_back(multiply(powers.back(), powers.back()));
    if (worst_tv(powers.back(), target).tv <= 0.25) {
      upper = std::uint64_t{1} << j;
      below_at_upper = true;
      break;
    }
  }
  if (!below_at_upper) {
    Dense at_cap;
    bool started = false;
    for (int j = 0; j <= top_bit; ++j) {
      if (!((cap >> j) & 1u)) continue;
      at_cap = started ? multiply(at_cap, powers[j]) : powers[j];
      started = true;
    }
    const auto worst = worst_tv(at_cap, target);
    if (worst.tv > 0.25) return {MixingKind::CappedLowerBound, cap, worst.start, worst.tv};
  }

  // Largest t < upper with d(t) > 1/4, by binary lifting.
  std::uint64_t t = 0;
  Dense current;
  const int lift_top = below_at_upper ? std::bit_width(upper) - 2 : top_bit;
  for (int j = lift_top; j >= 0; --j) {
    const std::uint64_t candidate_t = t + (std::uint64_t{1} << j);
    if (candidate_t >= upper) continue;
    Dense candidate = t == 0 ? powers[j] : multiply(current, powers[j]);
    if (worst_tv(candidate, target).tv > 0.25) {
      t = candidate_t;
      current = std::move(candidate);
    }
  }

  const WorstCase before = t == 0 ? worst_tv_identity(target) : worst_tv(current, target);
  const Dense at_mix = t == 0 ? powers[0] : multiply(current, powers[0]);
  const WorstCase after = worst_tv(at_mix, target);
  require(before.tv > 0.25 && after.tv <= 0.25, ErrorKind::NumericGate,
          "worst-case TV is not monotone around t = " + std::to_string(t + 1));
  return {MixingKind::Exact, t + 1, after.start, after.tv};
}

SpectralSandwich spectral_sandwich(double gap, const GibbsDistribution& pi) {
  require(gap > 0.0 && gap <= 1.0 + 1e-12, ErrorKind::DomainError, "gap must lie in (0, 1]");
  return {std::numbers::ln2 * (1.0 / gap - 1.0), (std::log(4.0) - pi.min_log_probability()) / gap};
}

}  // namespace glassmix
