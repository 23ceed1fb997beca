#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "glassmix/model.hpp"

namespace fixtures {

inline glassmix::DisorderInstance instance(int n, int p, std::uint64_t seed, double beta = 0.0) {
  return glassmix::DisorderInstance::sample({n, p, beta}, seed);
}

inline glassmix::DisorderInstance zero(int n, int p) { return glassmix::DisorderInstance::zero({n, p, 0.0}); }

inline int sigma(glassmix::State s, int j) { return ((s >> j) & 1u) ? 1 : -1; }

/// H by looping over every ordered index tuple of a FullOrdered instance,
/// first index slowest.
inline double naive_energy(const glassmix::DisorderInstance& inst, glassmix::State s) {
  const int n = inst.n();
  const int p = inst.p();
  const auto g = inst.couplings();
  std::vector<int> idx(p, 0);
  long double sum = 0.0L;
  for (std::size_t c = 0; c < g.size(); ++c) {
    std::size_t rest = c;
    for (int k = p - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % n);
      rest /= n;
    }
    int prod = 1;
    for (int k = 0; k < p; ++k) prod *= sigma(s, idx[k]);
    sum += g[c] * prod;
  }
  return static_cast<double>(-std::pow(static_cast<long double>(n), -0.5L * (p - 1)) * sum);
}

/// Same for CollapsedMultiset: sorted multisets in lexicographic order, each
/// weighted by sqrt(p! / prod m_i!).
inline double naive_collapsed_energy(const glassmix::DisorderInstance& inst, glassmix::State s) {
  const int n = inst.n();
  const int p = inst.p();
  const auto g = inst.couplings();
  std::vector<int> idx(p, 0);
  long double sum = 0.0L;
  std::size_t c = 0;
  while (true) {
    long double mult = std::tgamma(p + 1.0L);
    int run = 1;
    for (int k = 1; k <= p; ++k) {
      if (k < p && idx[k] == idx[k - 1]) {
        ++run;
      } else {
        mult /= std::tgamma(run + 1.0L);
        run = 1;
      }
    }
    int prod = 1;
    for (int k = 0; k < p; ++k) prod *= sigma(s, idx[k]);
    sum += std::sqrt(mult) * g[c++] * prod;
    int k = p - 1;
    while (k >= 0 && idx[k] == n - 1) --k;
    if (k < 0) break;
    ++idx[k];
    for (int m = k + 1; m < p; ++m) idx[m] = idx[k];
  }
  return static_cast<double>(-std::pow(static_cast<long double>(n), -0.5L * (p - 1)) * sum);
}

}  // namespace fixtures
