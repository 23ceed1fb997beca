#include "glassmix/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "glassmix/rng.hpp"

namespace glassmix {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// C(n, k) saturating at kSaturated.
std::uint64_t saturating_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(result);
}

inline double walsh_character(State mask, State bits) {
  return (std::popcount(mask & ~bits) & 1) ? -1.0 : 1.0;
}

void check_state(const DisorderInstance& inst, State s) {
  require((s & ~full_mask(inst.n())) == 0, ErrorKind::DimensionMismatch,
          "state index has bits beyond N=" + std::to_string(inst.n()));
}

// Calls visit(mask, tuple_index, multiplicity) for every ordered tuple
// (FullOrdered) or sorted multiset (CollapsedMultiset), in lexicographic order.
template <typename Visit>
void for_each_index_tuple(int n, int p, Representation repr, Visit&& visit) {
  std::vector<int> idx(p, 0);
  std::vector<State> prefix(p + 1, 0);  // prefix[k] = XOR of bits of idx[0..k)
  std::vector<double> log_factorial(p + 1, 0.0);
  for (int k = 1; k <= p; ++k) log_factorial[k] = log_factorial[k - 1] + std::log(static_cast<double>(k));

  auto multiplicity = [&]() {
    if (repr == Representation::FullOrdered) return 1.0;
    double log_mult = log_factorial[p];
    int run = 1;
    for (int k = 1; k <= p; ++k) {
      if (k < p && idx[k] == idx[k - 1]) {
        ++run;
      } else {
        log_mult -= log_factorial[run];
        run = 1;
      }
    }
    return std::round(std::exp(log_mult));
  };

  for (int k = 0; k < p; ++k) prefix[k + 1] = prefix[k] ^ (State{1} << idx[k]);
  std::uint64_t counter = 0;
  while (true) {
    visit(prefix[p], counter++, multiplicity());
    int k = p - 1;
    while (k >= 0 && idx[k] == n - 1) --k;
    if (k < 0) break;
    ++idx[k];
    for (int m = k + 1; m < p; ++m) idx[m] = (repr == Representation::FullOrdered) ? 0 : idx[k];
    for (int m = k; m < p; ++m) prefix[m + 1] = prefix[m] ^ (State{1} << idx[m]);
  }
}

}  // namespace

SpinConfiguration::SpinConfiguration(int n, State bits) : bits_(bits), n_(n) {
  require(n >= 1 && n <= kMaxSpins, ErrorKind::InvalidParams, "spin count must lie in [1, 30]");
  require((bits & ~full_mask(n)) == 0, ErrorKind::InvalidParams, "bits beyond position n-1 must be zero");
}

int SpinConfiguration::magnetization() const { return 2 * std::popcount(bits_) - n_; }

void SpinConfiguration::flip(int j) {
  require(j >= 0 && j < n_, ErrorKind::IndexOutOfRange, "site " + std::to_string(j));
  bits_ ^= State{1} << j;
}

SpinConfiguration SpinConfiguration::flipped(int j) const {
  SpinConfiguration copy = *this;
  copy.flip(j);
  return copy;
}

int hamming(const SpinConfiguration& sigma, const SpinConfiguration& tau) {
  require(sigma.size() == tau.size(), ErrorKind::DimensionMismatch, "hamming: lengths differ");
  return std::popcount(sigma.bits() ^ tau.bits());
}

void ModelParams::validate() const {
  require(n >= 1 && n <= kMaxSpins, ErrorKind::InvalidParams, "n must lie in [1, 30]");
  require(p >= 2, ErrorKind::InvalidParams, "p must be at least 2");
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::InvalidParams, "beta must be finite and >= 0");
}

std::string_view to_string(Representation repr) {
  return repr == Representation::FullOrdered ? "full_ordered" : "collapsed_multiset";
}

Representation representation_from_string(std::string_view name) {
  if (name == "full_ordered") return Representation::FullOrdered;
  if (name == "collapsed_multiset") return Representation::CollapsedMultiset;
  fail(ErrorKind::InvalidParams, "unknown representation '" + std::string(name) + "'");
}

std::uint64_t coupling_count(int n, int p, Representation repr) {
  if (repr == Representation::FullOrdered) {
    std::uint64_t count = 1;
    for (int k = 0; k < p; ++k) count = saturating_mul(count, static_cast<std::uint64_t>(n));
    return count;
  }
  return saturating_binomial(static_cast<std::uint64_t>(n) + p - 1, static_cast<std::uint64_t>(p));
}

Representation default_representation(int n, int p) {
  return coupling_count(n, p, Representation::FullOrdered) <= kMaxCouplings ? Representation::FullOrdered
                                                                            : Representation::CollapsedMultiset;
}

std::vector<double> multiset_multiplicities(int n, int p) {
  const std::uint64_t count = coupling_count(n, p, Representation::CollapsedMultiset);
  require(count <= kMaxCouplings, ErrorKind::CapacityExceeded, "multiset count exceeds budget");
  std::vector<double> out;
  out.reserve(count);
  for_each_index_tuple(n, p, Representation::CollapsedMultiset,
                       [&](State, std::uint64_t, double mult) { out.push_back(mult); });
  return out;
}

DisorderInstance::DisorderInstance(const ModelParams& params, Representation repr, std::vector<double> couplings,
                                   std::uint64_t seed)
    : params_(params), repr_(repr), seed_(seed), couplings_(std::move(couplings)) {}

DisorderInstance DisorderInstance::sample(const ModelParams& params, std::uint64_t seed, Representation repr) {
  params.validate();
  const std::uint64_t count = coupling_count(params.n, params.p, repr);
  require(count <= kMaxCouplings, ErrorKind::CapacityExceeded,
          "coupling count " + std::to_string(count) + " exceeds budget for " + std::string(to_string(repr)));
  std::vector<double> couplings(count);
  for (std::uint64_t i = 0; i < count; ++i) couplings[i] = counter_normal(seed, 0, i);

  double sum = 0.0;
  for (double g : couplings) sum += g;
  const double mean = sum / static_cast<double>(count);
  require(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(count)), ErrorKind::NumericGate,
          "coupling sample mean failed the generation sanity gate");

  DisorderInstance inst(params, repr, std::move(couplings), seed);
  inst.reduce();
  return inst;
}

DisorderInstance DisorderInstance::sample(const ModelParams& params, std::uint64_t seed) {
  return sample(params, seed, default_representation(params.n, params.p));
}

DisorderInstance DisorderInstance::from_couplings(const ModelParams& params, Representation repr,
                                                  std::vector<double> couplings, std::uint64_t seed) {
  params.validate();
  const std::uint64_t count = coupling_count(params.n, params.p, repr);
  require(count <= kMaxCouplings, ErrorKind::CapacityExceeded, "coupling count exceeds budget");
  require(couplings.size() == count, ErrorKind::DimensionMismatch,
          "expected " + std::to_string(count) + " couplings, got " + std::to_string(couplings.size()));
  for (double g : couplings) require(std::isfinite(g), ErrorKind::InvalidParams, "non-finite coupling");
  DisorderInstance inst(params, repr, std::move(couplings), seed);
  inst.reduce();
  return inst;
}

DisorderInstance DisorderInstance::zero(const ModelParams& params, Representation repr) {
  params.validate();
  const std::uint64_t count = coupling_count(params.n, params.p, repr);
  require(count <= kMaxCouplings, ErrorKind::CapacityExceeded, "coupling count exceeds budget");
  return from_couplings(params, repr, std::vector<double>(count, 0.0), 0);
}

void DisorderInstance::reduce() {
  const int n = params_.n;
  const int p = params_.p;
  const double prefactor = -std::pow(static_cast<double>(n), -0.5 * (p - 1));

  std::vector<std::pair<State, double>> terms;
  if (n <= kMaxTableSpins) {
    std::vector<double> dense(std::size_t{1} << n, 0.0);
    std::vector<char> touched(std::size_t{1} << n, 0);
    for_each_index_tuple(n, p, repr_, [&](State mask, std::uint64_t i, double mult) {
      dense[mask] += (mult == 1.0 ? 1.0 : std::sqrt(mult)) * couplings_[i];
      touched[mask] = 1;
    });
    for (std::size_t mask = 0; mask < dense.size(); ++mask) {
      if (touched[mask]) terms.emplace_back(static_cast<State>(mask), dense[mask]);
    }
  } else {
    std::unordered_map<State, double> sparse;
    for_each_index_tuple(n, p, repr_, [&](State mask, std::uint64_t i, double mult) {
      sparse[mask] += (mult == 1.0 ? 1.0 : std::sqrt(mult)) * couplings_[i];
    });
    terms.assign(sparse.begin(), sparse.end());
    std::sort(terms.begin(), terms.end());
  }

  masks_.clear();
  weights_.clear();
  for (const auto& [mask, w] : terms) {
    masks_.push_back(mask);
    weights_.push_back(prefactor * w);
  }

  site_offsets_.assign(n + 1, 0);
  for (State mask : masks_) {
    for (int j = 0; j < n; ++j) site_offsets_[j + 1] += (mask >> j) & 1u;
  }
  for (int j = 0; j < n; ++j) site_offsets_[j + 1] += site_offsets_[j];
  site_masks_.assign(site_offsets_[n], 0);
  site_weights_.assign(site_offsets_[n], 0.0);
  std::vector<std::size_t> cursor(site_offsets_.begin(), site_offsets_.end() - 1);
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    for (int j = 0; j < n; ++j) {
      if ((masks_[t] >> j) & 1u) {
        site_masks_[cursor[j]] = masks_[t];
        site_weights_[cursor[j]] = weights_[t];
        ++cursor[j];
      }
    }
  }
}

double DisorderInstance::energy(State s) const {
  check_state(*this, s);
  double h = 0.0;
  for (std::size_t t = 0; t < masks_.size(); ++t) h += weights_[t] * walsh_character(masks_[t], s);
  return h;
}

double DisorderInstance::energy(const SpinConfiguration& sigma) const {
  require(sigma.size() == n(), ErrorKind::DimensionMismatch, "configuration length differs from N");
  return energy(sigma.bits());
}

double DisorderInstance::energy_delta(State s, int site) const {
  require(site >= 0 && site < n(), ErrorKind::IndexOutOfRange, "site " + std::to_string(site));
  double sum = 0.0;
  for (std::size_t t = site_offsets_[site]; t < site_offsets_[site + 1]; ++t) {
    sum += site_weights_[t] * walsh_character(site_masks_[t], s);
  }
  return -2.0 * sum;
}

double DisorderInstance::energy_delta(const SpinConfiguration& sigma, int site) const {
  require(sigma.size() == n(), ErrorKind::DimensionMismatch, "configuration length differs from N");
  return energy_delta(sigma.bits(), site);
}

std::vector<double> energy_table(const DisorderInstance& inst) {
  const int n = inst.n();
  require(n <= kMaxTableSpins, ErrorKind::CapacityExceeded, "energy_table requires N <= 20");
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> table(states);
  State current = 0;
  double h = inst.energy(current);
  table[0] = h;
  for (std::size_t i = 1; i < states; ++i) {
    const int site = std::countr_zero(i);
    h += inst.energy_delta(current, site);
    current ^= State{1} << site;
    table[current] = h;
  }
  return table;
}

double correlation(int p, double r) {
  require(p >= 1, ErrorKind::DomainError, "correlation: p must be >= 1");
  require(r >= 0.0 && r <= 1.0, ErrorKind::DomainError, "correlation: r must lie in [0, 1]");
  return std::pow(1.0 - 2.0 * r, p);
}

double halved_distance_correlation(int p, double r) {
  require(p >= 1, ErrorKind::DomainError, "correlation: p must be >= 1");
  require(r >= 0.0 && r <= 2.0, ErrorKind::DomainError, "correlation: r must lie in [0, 2]");
  return std::pow(1.0 - r / 2.0, p);
}

}  // namespace glassmix
