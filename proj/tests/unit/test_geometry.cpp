#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "glassmix/geometry.hpp"

using namespace glassmix;

namespace {

std::vector<State> filter_shell(int n, State center, int lo, int hi) {
  std::vector<State> out;
  for (State s = 0; s < (State{1} << n); ++s) {
    const int d = std::popcount(s ^ center);
    if (d >= lo && d <= hi) out.push_back(s);
  }
  return out;
}

std::uint64_t pascal(int n, int k) {
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k];
}

}  // namespace

TEST_CASE("surfaces and balls equal the filter oracle") {
  for (int n = 1; n <= 9; ++n) {
    for (State center : {State{0}, full_mask(n), State{0x55u} & full_mask(n), State{0x1u}}) {
      for (int k = 0; k <= n; ++k) {
        CHECK(collect(surface_states({center, k, n})) == filter_shell(n, center, k, k));
        CHECK(collect(ball_states({center, k, n})) == filter_shell(n, center, 0, k));
      }
    }
  }
  CHECK(collect(surface_states({0b1011, 0, 4})) == std::vector<State>{0b1011});
  CHECK(collect(surface_states({0b1011, 4, 4})) == std::vector<State>{0b0100});
  CHECK(collect(ball_states({3, 0, 6})) == std::vector<State>{3});
  CHECK(collect(ball_states({0, 1, 4})).size() == 5);
  CHECK(collect(ball_states({77, 3, 10})).size() == 176);
}

TEST_CASE("n = 6, k = 2 surface") {
  const auto s = collect(surface_states({0b101100, 2, 6}));
  CHECK(s.size() == 15);
  for (State t : s) CHECK(std::popcount(t ^ 0b101100u) == 2);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
}

TEST_CASE("streams at N = 20 have binomial sizes") {
  std::size_t count = 0;
  State prev = 0;
  bool ordered = true;
  for (State s : surface_states({0xABCDEu, 10, 20})) {
    if (count > 0 && s <= prev) ordered = false;
    prev = s;
    ++count;
  }
  CHECK(count == 184756);
  CHECK(ordered);
  CHECK(collect(ball_states({12345, 3, 20})).size() == ball_volume(20, 3));
}

TEST_CASE("shell stream rejects invalid specs") {
  CHECK_THROWS_AS(surface_states({0, 5, 4}), Error);
  CHECK_THROWS_AS(surface_states({16, 1, 4}), Error);
  CHECK_THROWS_AS(surface_states({0, 1, 21}), Error);
}

TEST_CASE("binomials and ball volumes") {
  for (int n = 0; n <= 62; ++n)
    for (int k = 0; k <= n; ++k) REQUIRE(binomial(n, k) == pascal(n, k));
  CHECK(ball_volume(13, 0) == 1);
  CHECK(ball_volume(13, 13) == 8192);
  CHECK(ball_volume(62, 62) == (std::uint64_t{1} << 62));
  CHECK(ball_volume(20, 5) == 21700);
  try {
    ball_volume(63, 2);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.25) == doctest::Approx(0.5623351446188083).epsilon(1e-14));
  CHECK_THROWS_AS(binary_entropy(-0.01), Error);
  CHECK_THROWS_AS(binary_entropy(1.01), Error);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double a = (i + 0.5) / 100.0, b = (j + 0.5) / 100.0;
      CHECK(binary_entropy(0.5 * (a + b)) >= 0.5 * (binary_entropy(a) + binary_entropy(b)) - 1e-15);
    }
  }
}

TEST_CASE("surface count and ball volume entropy bounds") {
  for (int n = 1; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double g = binary_entropy(static_cast<double>(k) / n);
      CHECK(std::log(static_cast<double>(binomial(n, k))) <= n * g + 1e-12);
      if (4 * k <= n) {
        const std::uint64_t vol = ball_volume(n, 2 * k);
        CHECK(vol <= (2 * k + 1) * binomial(n, 2 * k));
        CHECK(std::log(static_cast<double>((2 * k + 1) * binomial(n, 2 * k))) <=
              std::log(2.0 * k + 1) + 2.0 * n * g + 1e-12);
      }
    }
  }
}

TEST_CASE("balls farther apart than 2k are disjoint") {
  const int n = 10;
  for (State a = 0; a < 1024; a += 37) {
    for (State b = 0; b < 1024; b += 53) {
      for (int k = 1; k <= 3; ++k) {
        if (std::popcount(a ^ b) <= 2 * k) continue;
        const auto ba = collect(ball_states({a, k, n}));
        const std::set<State> sa(ba.begin(), ba.end());
        for (State t : ball_states({b, k, n})) REQUIRE(!sa.contains(t));
      }
    }
  }
}
