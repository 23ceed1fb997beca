#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <vector>

#include "glassmix/model.hpp"

namespace glassmix {

struct BallSpec {
  State center = 0;
  int k = 0;  // radius in spins
  int n = 1;
};

/// States whose Hamming distance to `center` lies in [lo, hi], produced in
/// increasing index order without materialising the set.
class HammingShellStream {
 public:
  HammingShellStream(int n, State center, int lo, int hi);

  std::optional<State> next();

  class iterator {
   public:
    using value_type = State;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(HammingShellStream* stream) : stream_(stream) { ++*this; }

    State operator*() const { return *value_; }
    iterator& operator++() {
      value_ = stream_->next();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return !value_.has_value(); }

   private:
    HammingShellStream* stream_ = nullptr;
    std::optional<State> value_;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  // Smallest state > `after` (or >= 0 when !started_) within the shell.
  std::optional<State> successor() const;
  // Smallest `width`-bit suffix x with lo <= used + popcount(x ^ center_low) <= hi.
  std::optional<State> min_fill(int width, int used) const;

  int n_;
  State center_;
  int lo_;
  int hi_;
  bool started_ = false;
  bool done_ = false;
  State current_ = 0;
};

/// Exactly C(n, k) states at distance k.
HammingShellStream surface_states(const BallSpec& spec);
/// All states at distance <= k.
HammingShellStream ball_states(const BallSpec& spec);

std::vector<State> collect(HammingShellStream stream);

inline constexpr int kMaxVolumeN = 62;

/// Exact C(n, k) for n <= 62.
std::uint64_t binomial(int n, int k);

/// sum_{j<=k} C(n, j), exact for n <= 62 (Overflow beyond).
std::uint64_t ball_volume(int n, int k);

/// -r ln r - (1-r) ln(1-r), with gamma(0) = gamma(1) = 0.
double binary_entropy(double r);

}  // namespace glassmix
