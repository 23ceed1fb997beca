#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "glassmix/error.hpp"

namespace glassmix {

/// Index of a configuration in {-1,1}^N: bit j set means spin j is +1.
using State = std::uint32_t;

inline constexpr int kMaxSpins = 30;

inline constexpr State full_mask(int n) { return n >= 32 ? ~State{0} : ((State{1} << n) - 1); }

/// N Ising spins packed into one word.
class SpinConfiguration {
 public:
  SpinConfiguration(int n, State bits);

  static SpinConfiguration all_up(int n) { return {n, full_mask(n)}; }
  static SpinConfiguration all_down(int n) { return {n, 0}; }

  int size() const { return n_; }
  State bits() const { return bits_; }
  State index() const { return bits_; }

  /// +1 or -1.
  int spin(int j) const { return ((bits_ >> j) & 1u) ? 1 : -1; }
  int magnetization() const;

  void flip(int j);
  SpinConfiguration flipped(int j) const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  State bits_;
  int n_;
};

/// Number of differing spins.
int hamming(const SpinConfiguration& sigma, const SpinConfiguration& tau);

struct ModelParams {
  int n = 1;
  int p = 2;
  double beta = 0.0;

  void validate() const;
};

enum class Representation { FullOrdered, CollapsedMultiset };

std::string_view to_string(Representation repr);
Representation representation_from_string(std::string_view name);

inline constexpr std::uint64_t kMaxCouplings = 100'000'000;

/// N^p for FullOrdered, C(N+p-1, p) for CollapsedMultiset; saturates at UINT64_MAX.
std::uint64_t coupling_count(int n, int p, Representation repr);

/// FullOrdered when N^p fits the coupling budget, CollapsedMultiset otherwise.
Representation default_representation(int n, int p);

/// One draw of the p-spin couplings and the Hamiltonian they define.
///
/// The Hamiltonian is stored as its Walsh expansion: every index tuple reduces
/// to the set of indices that appear an odd number of times, so
///   H(sigma) = sum_S w_S prod_{j in S} sigma_j
/// with one term per distinct odd-multiplicity set S. Both representations
/// reduce to the same kind of expansion.
class DisorderInstance {
 public:
  static DisorderInstance sample(const ModelParams& params, std::uint64_t seed, Representation repr);
  static DisorderInstance sample(const ModelParams& params, std::uint64_t seed);

  /// Explicit coupling values (instance files, test fixtures). For
  /// CollapsedMultiset the values are ordered like the lexicographic multiset
  /// enumeration and each carries weight sqrt(multiplicity).
  static DisorderInstance from_couplings(const ModelParams& params, Representation repr,
                                         std::vector<double> couplings, std::uint64_t seed = 0);
  static DisorderInstance zero(const ModelParams& params, Representation repr = Representation::FullOrdered);

  const ModelParams& params() const { return params_; }
  int n() const { return params_.n; }
  int p() const { return params_.p; }
  Representation representation() const { return repr_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> couplings() const { return couplings_; }

  /// Number of Walsh terms after reduction.
  std::size_t term_count() const { return masks_.size(); }

  double energy(State s) const;
  double energy(const SpinConfiguration& sigma) const;

  /// H(sigma with `site` flipped) - H(sigma).
  double energy_delta(State s, int site) const;
  double energy_delta(const SpinConfiguration& sigma, int site) const;

 private:
  DisorderInstance(const ModelParams& params, Representation repr, std::vector<double> couplings,
                   std::uint64_t seed);
  void reduce();

  ModelParams params_;
  Representation repr_;
  std::uint64_t seed_;
  std::vector<double> couplings_;

  std::vector<State> masks_;
  std::vector<double> weights_;  // already include the -N^{-(p-1)/2} prefactor
  // Terms containing each site, stored contiguously per site.
  std::vector<std::size_t> site_offsets_;
  std::vector<State> site_masks_;
  std::vector<double> site_weights_;
};

/// Multiplicity p!/prod(m_i!) of every sorted multiset, in enumeration order.
/// Exact while below 2^53.
std::vector<double> multiset_multiplicities(int n, int p);

inline constexpr int kMaxTableSpins = 20;

/// H over all 2^N states indexed by State, filled by a Gray-code walk of
/// single-flip updates from the all-minus configuration.
std::vector<double> energy_table(const DisorderInstance& inst);

/// Normalised covariance of the p-spin energies at normalised Hamming
/// distance r = d/N: E[H(sigma)H(tau)] = N * correlation(p, d/N) = N (1 - 2r)^p.
double correlation(int p, double r);

/// (1 - r/2)^p on r in [0, 2]. Strictly decreasing with c(0) = 1, but it is
/// not the covariance of H above; kept so that comparisons against it can be
/// reported next to the exact law.
double halved_distance_correlation(int p, double r);

}  // namespace glassmix
