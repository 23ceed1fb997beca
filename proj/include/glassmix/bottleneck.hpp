#pragma once

#include <span>
#include <vector>

#include "glassmix/exact.hpp"
#include "glassmix/model.hpp"

namespace glassmix {

/// (1/pi(A)) sum_{s in A, t not in A} pi(s) P(s,t). Requires A nonempty and
/// pi(A) <= 1/2 + 1e-12 (InvalidSet otherwise).
double bottleneck_ratio(const TransitionKernel& kernel, const GibbsDistribution& pi, std::span<const State> set);

/// t_mix >= 1 / (4 ratio).
double jsds_lower_bound(double ratio);

/// The estimate chain for A = B_k(center), from the exact ratio down to the
/// entropy/Gaussian-decomposition bound:
///   (i)   exact ratio
///   (ii)  pi(S_k) / pi(B_k)
///   (iii) |S_k| exp(beta [H(center) - min_{S_k} H])
///   (iv)  exp(N gamma(k/N) + beta [H(center)(1 - c_p(k/N)) - min_{S_k} G])
/// Terms (iii) and (iv) are kept in log form; the linear values may be inf.
struct ChainTerms {
  double exact_ratio = 0.0;
  double surface_fraction = 0.0;
  double log_energy_bound = 0.0;
  double log_entropy_bound = 0.0;
  double energy_bound = 0.0;
  double entropy_bound = 0.0;
  double min_surface_energy = 0.0;
  double min_surface_g = 0.0;
  bool ratio_le_fraction = false;     // (i) <= (ii)
  bool fraction_le_energy = false;    // (ii) <= (iii)
  bool energy_le_entropy = false;     // (iii) <= (iv)

  bool all_hold() const { return ratio_le_fraction && fraction_le_energy && energy_le_entropy; }
};

inline constexpr double kChainTolerance = 1e-9;

ChainTerms deterministic_chain(const DisorderInstance& inst, const TransitionKernel& kernel,
                               const GibbsDistribution& pi, State center, int k);

/// beta beta_c (1-eps)(1-delta)(1 - c_p(r)) - gamma(r): on the landscape event,
/// 4 t_mix >= exp(N * exponent).
double lemma_exponent(double beta, double eps, double delta, int p, double r);

struct BoundCertificate {
  State center = 0;
  int k = 0;
  double ratio = 0.0;
  double tmix_lower = 0.0;
  double pi_ball = 0.0;
  ChainTerms chain;
};

/// Ratio and log pi of the ball without the chain terms.
struct BallCandidate {
  State center = 0;
  int k = 0;
  double log_pi_ball = 0.0;
  double ratio = 0.0;
  bool valid = false;  // pi(B) <= 1/2
};

BallCandidate evaluate_ball(const TransitionKernel& kernel, const GibbsDistribution& pi, State center, int k);

/// Every (center, k) with pi(B_k(center)) <= 1/2; returns the certificate
/// with the largest tmix_lower, ties broken by smaller ratio, then smaller
/// center, then smaller k. Throws NoValidSet when no candidate is admissible.
BoundCertificate ball_scan(const DisorderInstance& inst, const TransitionKernel& kernel,
                           const GibbsDistribution& pi, std::span<const State> centers,
                           std::span<const int> radii);

enum class RadiusRange {
  Corollary,   // k = 1 .. floor(N/4)
  Definition,  // k = 1 .. ceil(N/2) - 1
};

std::vector<int> default_radii(int n, RadiusRange range = RadiusRange::Corollary);

}  // namespace glassmix
