#include "glassmix/dynamics.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace glassmix {

double HeatBathRule::accept(double beta, double delta_h) const {
  const double x = beta * delta_h;
  if (x == 0.0) return 0.5;
  // exp overflows to +inf for large x, which correctly yields 0.
  return 1.0 / (1.0 + std::exp(x));
}

const SingleFlipRule& heat_bath() {
  static const HeatBathRule rule;
  return rule;
}

double transition_probability(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma,
                              const SpinConfiguration& tau, const SingleFlipRule& rule) {
  require(sigma.size() == inst.n() && tau.size() == inst.n(), ErrorKind::DimensionMismatch,
          "configuration length differs from N");
  const int d = hamming(sigma, tau);
  require(d <= 1, ErrorKind::NotAdjacent, "configurations differ in " + std::to_string(d) + " spins");
  const double inv_n = 1.0 / inst.n();
  if (d == 1) {
    const int site = std::countr_zero(sigma.bits() ^ tau.bits());
    return inv_n * rule.accept(beta, inst.energy_delta(sigma, site));
  }
  double leave = 0.0;
  for (int j = 0; j < inst.n(); ++j) leave += inv_n * rule.accept(beta, inst.energy_delta(sigma, j));
  return 1.0 - leave;
}

SpinConfiguration step(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma,
                       PhiloxEngine& rng, const SingleFlipRule& rule) {
  const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(inst.n())));
  const double u = rng.uniform();
  if (u < rule.accept(beta, inst.energy_delta(sigma, site))) return sigma.flipped(site);
  return sigma;
}

TrajectorySummary simulate(const DisorderInstance& inst, double beta, const SpinConfiguration& sigma0,
                           std::uint64_t horizon, std::uint64_t subsample, PhiloxEngine& rng,
                           const SingleFlipRule& rule) {
  require(subsample >= 1, ErrorKind::InvalidParams, "subsample must be >= 1");
  require(sigma0.size() == inst.n(), ErrorKind::DimensionMismatch, "configuration length differs from N");

  TrajectorySummary out{.final_state = sigma0, .sample_steps = {}, .energy_series = {}, .magnetization_series = {}};
  out.seed = rng.seed();
  SpinConfiguration sigma = sigma0;
  double h = inst.energy(sigma);
  out.sample_steps.push_back(0);
  out.energy_series.push_back(h);
  out.magnetization_series.push_back(sigma.magnetization());

  const int n = inst.n();
  double magnetization_sum = 0.0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double u = rng.uniform();
    const double delta = inst.energy_delta(sigma, site);
    if (u < rule.accept(beta, delta)) {
      sigma.flip(site);
      h += delta;
    }
    magnetization_sum += sigma.magnetization();
    if (t % kDriftCheckPeriod == 0) {
      const double fresh = inst.energy(sigma);
      require(std::abs(fresh - h) <= 1e-6 * std::max(1.0, std::abs(fresh)), ErrorKind::NumericGate,
              "running energy drifted at step " + std::to_string(t));
      h = fresh;
    }
    if (t % subsample == 0) {
      out.sample_steps.push_back(t);
      out.energy_series.push_back(h);
      out.magnetization_series.push_back(sigma.magnetization());
    }
  }
  out.final_state = sigma;
  out.steps = horizon;
  out.magnetization_time_average = horizon == 0 ? static_cast<double>(sigma0.magnetization())
                                                : magnetization_sum / static_cast<double>(horizon);
  return out;
}

}  // namespace glassmix
