#pragma once

#include <cstdint>
#include <vector>

#include "glassmix/model.hpp"
#include "glassmix/rng.hpp"

namespace glassmix {

/// Single-flip acceptance rule: probability of accepting a flip that changes
/// the energy by delta_h at inverse temperature beta.
class SingleFlipRule {
 public:
  virtual ~SingleFlipRule() = default;
  virtual double accept(double beta, double delta_h) const = 0;
};

/// Heat-bath acceptance (1 + exp(beta * delta_h))^{-1}.
class HeatBathRule final : public SingleFlipRule {
 public:
  double accept(double beta, double delta_h) const override;
};

const SingleFlipRule& heat_bath();

/// P(sigma, tau) for the discrete-time chain that picks a site uniformly and
/// flips it with the rule's acceptance. Throws NotAdjacent if d(sigma,tau) > 1.
double transition_probability(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma,
                              const SpinConfiguration& tau, const SingleFlipRule& rule = heat_bath());

/// One step of the chain.
SpinConfiguration step(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma,
                       PhiloxEngine& rng, const SingleFlipRule& rule = heat_bath());

struct TrajectorySummary {
  SpinConfiguration final_state;
  std::vector<std::uint64_t> sample_steps;
  std::vector<double> energy_series;
  std::vector<int> magnetization_series;
  double magnetization_time_average = 0.0;  // over steps 1..horizon
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
};

/// Running-energy drift guard period.
inline constexpr std::uint64_t kDriftCheckPeriod = std::uint64_t{1} << 16;

/// Runs `horizon` steps from sigma0, recording energy at step 0 and every
/// `subsample` steps. The running energy is rebuilt from scratch every
/// kDriftCheckPeriod steps and must agree to 1e-6 relative (NumericGate).
TrajectorySummary simulate(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma0,
                           std::uint64_t horizon, std::uint64_t subsample, PhiloxEngine& rng,
                           const SingleFlipRule& rule = heat_bath());

}  // namespace glassmix
