#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glassmix/dynamics.hpp"
#include "glassmix/model.hpp"

namespace glassmix {

inline constexpr int kMaxKernelSpins = 14;
inline constexpr int kMaxMixingSpins = 12;
inline constexpr std::uint64_t kDefaultMixingCap = 1'000'000;

/// Full single-flip transition matrix on 2^N states, stored as per-state
/// neighbour probabilities (bit j flipped) plus the holding probability.
class TransitionKernel {
 public:
  static TransitionKernel build(const DisorderInstance& inst, double beta, const SingleFlipRule& rule = heat_bath());
  static TransitionKernel from_energies(std::span<const double> energies, int n, double beta,
                                        const SingleFlipRule& rule = heat_bath());

  int n() const { return n_; }
  std::size_t n_states() const { return diagonal_.size(); }
  double beta() const { return beta_; }

  double neighbor(State s, int j) const { return neighbor_probs_[static_cast<std::size_t>(s) * n_ + j]; }
  std::span<const double> neighbors(State s) const {
    return {neighbor_probs_.data() + static_cast<std::size_t>(s) * n_, static_cast<std::size_t>(n_)};
  }
  double diagonal(State s) const { return diagonal_[s]; }

  /// P(from, to); zero unless the states are equal or Hamming neighbours.
  double operator()(State from, State to) const;

  double max_row_sum_error() const;
  double min_entry() const;

  /// Row-major dense copy, n_states x n_states.
  std::vector<double> dense() const;

 private:
  int n_ = 0;
  double beta_ = 0.0;
  std::vector<double> neighbor_probs_;
  std::vector<double> diagonal_;
};

struct GibbsDistribution {
  std::vector<double> log_weights;  // -beta H
  double log_z = 0.0;
  std::vector<double> probabilities;

  static GibbsDistribution from_energies(std::span<const double> energies, double beta);

  std::size_t size() const { return probabilities.size(); }
  double log_probability(State s) const { return log_weights[s] - log_z; }
  double min_log_probability() const;
  /// log pi(A) by log-sum-exp over the listed states.
  double log_mass(std::span<const State> states) const;
};

GibbsDistribution gibbs_distribution(const DisorderInstance& inst, double beta);

/// max over edges of |pi(s)P(s,t) - pi(t)P(t,s)| / max(pi(s)P(s,t), tiny).
double verify_detailed_balance(const TransitionKernel& kernel, const GibbsDistribution& pi);

/// ||pi P - pi||_1.
double stationarity_residual(const TransitionKernel& kernel, const GibbsDistribution& pi);

inline constexpr double kReversibilityGate = 1e-8;

/// Eigenvalues (ascending) of D^{1/2} P D^{-1/2}, D = diag(pi).
std::vector<double> symmetrized_spectrum(const TransitionKernel& kernel, const GibbsDistribution& pi);

struct SpectralGap {
  double lambda2 = 0.0;
  double gap = 0.0;
  double lambda_min = 0.0;
};

SpectralGap spectral_gap(const TransitionKernel& kernel, const GibbsDistribution& pi);

enum class MixingKind { Exact, CappedLowerBound };

struct MixingResult {
  MixingKind kind = MixingKind::Exact;
  std::uint64_t t_mix = 0;
  State worst_start = 0;
  double tv_at_t = 0.0;
};

/// Worst-case TV distance max_s ||P^t(s,.) - pi||_TV for t = 0..t_max, by
/// evolving one distribution per start state.
std::vector<double> tv_profile(const TransitionKernel& kernel, const GibbsDistribution& pi, std::uint64_t t_max);

/// Minimal t with worst-case TV <= 1/4, via repeated squaring of the dense
/// kernel and binary lifting over the non-increasing d(t). Returns
/// CappedLowerBound(cap) when d(cap) > 1/4.
MixingResult exact_mixing_time(const TransitionKernel& kernel, const GibbsDistribution& pi,
                               std::uint64_t cap = kDefaultMixingCap);

/// Same quantity by step-by-step evolution from every start, each start
/// stopping once its own TV reaches 1/4. Cost grows linearly in t_mix.
MixingResult mixing_time_by_evolution(const TransitionKernel& kernel, const GibbsDistribution& pi,
                                      std::uint64_t cap);

struct SpectralSandwich {
  double lower = 0.0;
  double upper = 0.0;
};

/// ln2 (1/gap - 1) <= t_mix <= (ln 4 - ln min pi) / gap.
SpectralSandwich spectral_sandwich(double gap, const GibbsDistribution& pi);

}  // namespace glassmix
