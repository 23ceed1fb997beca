#include "glassmix/geometry.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace glassmix {

HammingShellStream::HammingShellStream(int n, State center, int lo, int hi)
    : n_(n), center_(center), lo_(lo), hi_(hi) {
  require(n >= 1 && n <= kMaxTableSpins, ErrorKind::CapacityExceeded, "shell streams require N <= 20");
  require((center & ~full_mask(n)) == 0, ErrorKind::DimensionMismatch, "center has bits beyond N");
  require(0 <= lo && lo <= hi && hi <= n, ErrorKind::InvalidParams, "shell radii must satisfy 0 <= lo <= hi <= n");
}

std::optional<State> HammingShellStream::min_fill(int width, int used) const {
  if (used > hi_ || used + width < lo_) return std::nullopt;
  State x = 0;
  for (int b = width - 1; b >= 0; --b) {
    const int center_bit = static_cast<int>((center_ >> b) & 1u);
    // Prefer a 0 bit; it mismatches the center iff the center bit is 1.
    if (used + center_bit <= hi_ && used + center_bit + b >= lo_) {
      used += center_bit;
    } else {
      x |= State{1} << b;
      used += 1 - center_bit;
    }
  }
  return x;
}

std::optional<State> HammingShellStream::successor() const {
  if (!started_) return min_fill(n_, 0);
  for (int i = 0; i < n_; ++i) {
    if ((current_ >> i) & 1u) continue;
    const State high = ((current_ >> i) | 1u) << i;
    const int used = std::popcount((high ^ center_) & ~((State{1} << i) - 1) & full_mask(n_));
    if (auto low = min_fill(i, used)) return high | *low;
  }
  return std::nullopt;
}

std::optional<State> HammingShellStream::next() {
  if (done_) return std::nullopt;
  auto value = successor();
  started_ = true;
  if (!value) {
    done_ = true;
    return std::nullopt;
  }
  current_ = *value;
  return value;
}

HammingShellStream surface_states(const BallSpec& spec) {
  require(spec.k >= 0 && spec.k <= spec.n, ErrorKind::InvalidParams, "radius must lie in [0, n]");
  return {spec.n, spec.center, spec.k, spec.k};
}

HammingShellStream ball_states(const BallSpec& spec) {
  require(spec.k >= 0 && spec.k <= spec.n, ErrorKind::InvalidParams, "radius must lie in [0, n]");
  return {spec.n, spec.center, 0, spec.k};
}

std::vector<State> collect(HammingShellStream stream) {
  std::vector<State> out;
  for (State s : stream) out.push_back(s);
  return out;
}

std::uint64_t binomial(int n, int k) {
  require(n >= 0 && n <= kMaxVolumeN, ErrorKind::Overflow, "binomial is exact only for n <= 62");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) stays below 2^64 for n <= 62.
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint64_t ball_volume(int n, int k) {
  require(n >= 0 && n <= kMaxVolumeN, ErrorKind::Overflow,
          "ball_volume is exact only for n <= 62 (got " + std::to_string(n) + ")");
  require(k >= 0 && k <= n, ErrorKind::InvalidParams, "ball_volume requires 0 <= k <= n");
  std::uint64_t total = 0;
  for (int j = 0; j <= k; ++j) total += binomial(n, j);
  return total;
}

double binary_entropy(double r) {
  require(r >= 0.0 && r <= 1.0, ErrorKind::DomainError, "binary_entropy requires r in [0, 1]");
  if (r == 0.0 || r == 1.0) return 0.0;
  return -r * std::log(r) - (1.0 - r) * std::log1p(-r);
}

}  // namespace glassmix
