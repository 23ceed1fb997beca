#include "glassmix/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "glassmix/geometry.hpp"
#include "glassmix/parallel.hpp"
#include "glassmix/theory.hpp"

namespace glassmix {

namespace {

const double kLogHalf = std::log(0.5 + 1e-12);

// Ratio for an arbitrary set without the pi(A) <= 1/2 check.
double flow_ratio(const TransitionKernel& kernel, const GibbsDistribution& pi, std::span<const State> set) {
  std::vector<char> member(kernel.n_states(), 0);
  double top = -std::numeric_limits<double>::infinity();
  for (State s : set) {
    require(s < kernel.n_states(), ErrorKind::IndexOutOfRange, "state outside kernel");
    member[s] = 1;
    top = std::max(top, pi.log_weights[s]);
  }
  double flow = 0.0;
  double mass = 0.0;
  for (std::size_t s = 0; s < member.size(); ++s) {
    if (!member[s]) continue;
    const double w = std::exp(pi.log_weights[s] - top);
    double out = 0.0;
    for (int j = 0; j < kernel.n(); ++j) {
      if (!member[s ^ (std::size_t{1} << j)]) out += kernel.neighbor(static_cast<State>(s), j);
    }
    flow += w * out;
    mass += w;
  }
  return flow / mass;
}

bool better(const BallCandidate& a, const BallCandidate& b) {
  if (a.ratio != b.ratio) return a.ratio < b.ratio;
  if (a.center != b.center) return a.center < b.center;
  return a.k < b.k;
}

}  // namespace

double bottleneck_ratio(const TransitionKernel& kernel, const GibbsDistribution& pi, std::span<const State> set) {
  require(kernel.n_states() == pi.size(), ErrorKind::DimensionMismatch, "kernel and Gibbs sizes differ");
  require(!set.empty(), ErrorKind::InvalidSet, "set is empty");
  require(pi.log_mass(set) <= kLogHalf, ErrorKind::InvalidSet, "pi(A) exceeds 1/2");
  return flow_ratio(kernel, pi, set);
}

double jsds_lower_bound(double ratio) {
  require(ratio > 0.0, ErrorKind::DomainError, "ratio must be positive");
  return 1.0 / (4.0 * ratio);
}

BallCandidate evaluate_ball(const TransitionKernel& kernel, const GibbsDistribution& pi, State center, int k) {
  const auto ball = collect(ball_states({center, k, kernel.n()}));
  BallCandidate c{center, k, pi.log_mass(ball), 0.0, false};
  c.valid = c.log_pi_ball <= kLogHalf;
  c.ratio = flow_ratio(kernel, pi, ball);
  return c;
}

ChainTerms deterministic_chain(const DisorderInstance& inst, const TransitionKernel& kernel,
                               const GibbsDistribution& pi, State center, int k) {
  const int n = inst.n();
  require(kernel.n() == n && pi.size() == kernel.n_states(), ErrorKind::DimensionMismatch,
          "instance, kernel and Gibbs sizes differ");
  require(k >= 0 && k <= n, ErrorKind::InvalidParams, "radius must lie in [0, N]");
  const double beta = kernel.beta();

  const auto ball = collect(ball_states({center, k, n}));
  const auto surface = collect(surface_states({center, k, n}));
  const double log_pi_ball = pi.log_mass(ball);
  require(log_pi_ball <= kLogHalf, ErrorKind::InvalidSet, "pi(B_k(center)) exceeds 1/2");

  const double h0 = inst.energy(center);
  const double c = correlation(inst.p(), static_cast<double>(k) / n);
  double min_h = std::numeric_limits<double>::infinity();
  for (State tau : surface) min_h = std::min(min_h, inst.energy(tau));
  // Every surface state sits at the same distance, so min G = min H - H(center) c.
  double min_g = std::numeric_limits<double>::infinity();
  for (State tau : surface) min_g = std::min(min_g, inst.energy(tau) - h0 * c);

  ChainTerms t;
  t.exact_ratio = flow_ratio(kernel, pi, ball);
  t.surface_fraction = std::exp(pi.log_mass(surface) - log_pi_ball);
  t.min_surface_energy = min_h;
  t.min_surface_g = min_g;
  t.log_energy_bound = std::log(static_cast<double>(binomial(n, k))) + beta * (h0 - min_h);
  t.log_entropy_bound = n * binary_entropy(static_cast<double>(k) / n) + beta * (h0 * (1.0 - c) - min_g);
  t.energy_bound = std::exp(t.log_energy_bound);
  t.entropy_bound = std::exp(t.log_entropy_bound);

  t.ratio_le_fraction = t.exact_ratio <= t.surface_fraction * (1.0 + kChainTolerance);
  t.fraction_le_energy = std::log(t.surface_fraction) <= t.log_energy_bound + kChainTolerance;
  t.energy_le_entropy = t.log_energy_bound <= t.log_entropy_bound + kChainTolerance;
  return t;
}

double lemma_exponent(double beta, double eps, double delta, int p, double r) {
  require(beta >= 0.0, ErrorKind::DomainError, "beta must be >= 0");
  require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0, ErrorKind::DomainError,
          "eps and delta must lie in (0, 1)");
  require(r > 0.0 && r < 0.5, ErrorKind::DomainError, "r must lie in (0, 1/2)");
  require(p >= 2, ErrorKind::DomainError, "p must be >= 2");
  return beta * kBetaC * (1.0 - eps) * (1.0 - delta) * (1.0 - correlation(p, r)) - binary_entropy(r);
}

BoundCertificate ball_scan(const DisorderInstance& inst, const TransitionKernel& kernel,
                           const GibbsDistribution& pi, std::span<const State> centers,
                           std::span<const int> radii) {
  require(kernel.n() == inst.n(), ErrorKind::DimensionMismatch, "instance and kernel sizes differ");
  const std::size_t pairs = centers.size() * radii.size();
  std::vector<BallCandidate> candidates(pairs);
  parallel_for(pairs, [&](std::size_t i) {
    candidates[i] = evaluate_ball(kernel, pi, centers[i / radii.size()], radii[i % radii.size()]);
  });

  const BallCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (!c.valid || !(c.ratio > 0.0)) continue;
    if (best == nullptr || better(c, *best)) best = &c;
  }
  require(best != nullptr, ErrorKind::NoValidSet, "no (center, k) with pi(B) <= 1/2");

  BoundCertificate cert;
  cert.center = best->center;
  cert.k = best->k;
  cert.ratio = best->ratio;
  cert.tmix_lower = jsds_lower_bound(best->ratio);
  cert.pi_ball = std::exp(best->log_pi_ball);
  cert.chain = deterministic_chain(inst, kernel, pi, best->center, best->k);
  return cert;
}

std::vector<int> default_radii(int n, RadiusRange range) {
  const int top = range == RadiusRange::Corollary ? n / 4 : (n + 1) / 2 - 1;
  std::vector<int> radii;
  for (int k = 1; k <= top; ++k) radii.push_back(k);
  return radii;
}

}  // namespace glassmix
