#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace glassmix {

/// Philox4x32-10 block function (Salmon et al., Random123).
///
/// Counter-based: the output for a given (key, counter) is a pure function, so
/// any element of any stream can be produced independently of the others.
/// Counter words 0-1 carry the position within a stream, words 2-3 the stream id.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Mixes (seed, tag, index) into a new 64-bit seed with SplitMix64 finalizers.
///
/// Substream derivation used throughout the project:
///   disorder seed of sample i   = derive_seed(master, kDisorderTag, i)
///   trajectory seed of run i    = derive_seed(master, kTrajectoryTag, i)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

inline constexpr std::uint64_t kDisorderTag = 0x6469736f72646572ULL;    // "disorder"
inline constexpr std::uint64_t kTrajectoryTag = 0x7472616a6563746fULL;  // "trajecto"
inline constexpr std::uint64_t kBootstrapTag = 0x626f6f7473747270ULL;   // "bootstrp"

/// Maps a 64-bit word to a double in [0, 1) using its top 53 bits.
inline double to_unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Standard normal deviate number `index` of stream `stream` under `seed`.
/// Box-Muller on one Philox block; the sine branch is discarded so every index
/// is independent of its neighbours.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Sequential engine over one Philox stream. Satisfies UniformRandomBitGenerator.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  explicit PhiloxEngine(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  double uniform() { return to_unit_interval((*this)()); }

  /// Uniform integer in [0, bound) by multiply-shift with rejection (Lemire).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 2;
};

}  // namespace glassmix
