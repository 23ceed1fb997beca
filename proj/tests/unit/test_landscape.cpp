#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "glassmix/geometry.hpp"
#include "glassmix/landscape.hpp"
#include "glassmix/rng.hpp"
#include "glassmix/stats.hpp"
#include "glassmix/theory.hpp"

using namespace glassmix;

TEST_CASE("deep set membership is the strict threshold") {
  CHECK(deep_states(fixtures::zero(8, 3), 0.3).size() == 0);
  const auto inst = fixtures::instance(10, 3, 1);
  const auto table = energy_table(inst);
  const auto set = deep_states(inst, 0.5);
  CHECK(set.threshold == doctest::Approx(kBetaC * 0.5 * 10).epsilon(1e-15));
  std::size_t i = 0;
  for (State s = 0; s < table.size(); ++s) {
    const bool member = -table[s] > set.threshold;
    if (member) {
      REQUIRE(i < set.size());
      CHECK(set.members[i] == s);
      CHECK(set.energies[i] == table[s]);
      ++i;
    }
  }
  CHECK(i == set.size());
  CHECK(deep_states(inst, 0.5).members == set.members);

  // a table entry exactly at the threshold is excluded
  std::vector<double> flat(16, 0.0);
  flat[3] = -kBetaC * 0.5 * 4;
  flat[5] = -kBetaC * 0.5 * 4 - 1e-9;
  const auto edge = deep_states(flat, 4, 0.5);
  CHECK(edge.members == std::vector<State>{5});
  CHECK_THROWS_AS(deep_states(inst, 1.0), Error);
  CHECK_THROWS_AS(deep_states(DisorderInstance::zero({21, 2, 0.0}), 0.5), Error);
}

TEST_CASE("eps close to 1 selects about half of the states") {
  const int seeds = 200;
  std::vector<double> fractions;
  for (int i = 0; i < seeds; ++i) {
    const auto inst = fixtures::instance(10, 3, derive_seed(2, kDisorderTag, i));
    fractions.push_back(static_cast<double>(deep_states(inst, 1.0 - 1e-12).size()) / 1024.0);
  }
  const auto e = estimate_mean(fractions);
  CHECK(std::abs(e.mean - 0.5) <= 4.0 * e.std_error);
}

TEST_CASE("mean deep-set size matches 2^N phi(sqrt(N) beta_c (1 - eps))") {
  const int n = 12, seeds = 200;
  std::vector<double> counts;
  for (int i = 0; i < seeds; ++i)
    counts.push_back(static_cast<double>(deep_states(fixtures::instance(n, 3, derive_seed(3, kDisorderTag, i)), 0.4).size()));
  const auto e = estimate_mean(counts);
  const double expect = std::ldexp(phi(std::sqrt(n) * kBetaC * 0.6), n);
  CHECK(std::abs(e.mean - expect) <= 4.0 * e.std_error);
}

TEST_CASE("gaussian component algebra") {
  const auto inst = fixtures::instance(10, 3, 4);
  CHECK(gaussian_component(inst, 37, 37) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gaussian_component(fixtures::zero(6, 3), 1, 62) == 0.0);
  for (State s0 = 0; s0 < 1024; s0 += 97) {
    for (State t = 0; t < 1024; ++t) {
      const double c = correlation(3, std::popcount(s0 ^ t) / 10.0);
      const double h = inst.energy(t);
      CHECK(std::abs(gaussian_component(inst, s0, t) + inst.energy(s0) * c - h) <= 1e-12 * std::max(1.0, std::abs(h)));
    }
  }
}

TEST_CASE("G has variance N (1 - c^2) and is uncorrelated with H(sigma0)") {
  const int n = 10, m = 20000;
  for (int d : {1, 2, 4}) {
    std::vector<double> h0(m), g(m);
    const State s0 = 0b0110100101;
    const State t = s0 ^ full_mask(d);
    for (int i = 0; i < m; ++i) {
      const auto inst = fixtures::instance(n, 3, derive_seed(5 + d, kDisorderTag, i));
      h0[i] = inst.energy(s0);
      g[i] = gaussian_component(inst, s0, t);
    }
    const double c = correlation(3, static_cast<double>(d) / n);
    const auto e = estimate_mean(g);
    const double expect = n * (1.0 - c * c);
    // Var of the sample variance of a Gaussian: 2 sigma^4 / (m - 1)
    CHECK(std::abs(e.variance - expect) <= 4.0 * expect * std::sqrt(2.0 / (m - 1)));
    CHECK(std::abs(sample_correlation(h0, g)) <= 4.0 / std::sqrt(m));
  }
}

TEST_CASE("event on empty and zero instances") {
  const auto z = check_event(fixtures::zero(8, 3), 0.5, 0.5, 1);
  CHECK(!z.part1);
  CHECK(z.part2);
  CHECK(z.deep_count == 0);
  CHECK(std::isinf(z.min_g));
  CHECK(!z.holds());
  CHECK_THROWS_AS(check_event(fixtures::instance(8, 3, 1), 0.5, 0.5, 5), Error);
  CHECK_THROWS_AS(check_event(fixtures::instance(8, 3, 1), 0.5, 0.5, 0), Error);
}

TEST_CASE("event parts against a direct evaluation") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const auto inst = fixtures::instance(12, 4, seed);
    const int k = 1;
    const auto r = check_event(inst, 0.5, 0.7, k);
    const auto deep = deep_states(inst, 0.5);
    CHECK(r.part1 == (deep.size() > ball_volume(12, 2)));
    const double c = correlation(4, 1.0 / 12);
    const double threshold = -12 * kBetaC * 0.5 * 0.7 * (1.0 - c);
    bool ok = true;
    for (std::size_t i = 0; i < deep.size(); ++i) {
      double best = 1e300;
      for (int j = 0; j < 12; ++j) best = std::min(best, gaussian_component(inst, deep.members[i], deep.members[i] ^ (1u << j)));
      CHECK(r.per_center_min_g[i] == doctest::Approx(best).epsilon(1e-12));
      ok = ok && best >= threshold;
    }
    CHECK(r.part2 == ok);
    CHECK(r.radius_in_range);
  }
  CHECK(!check_event(fixtures::instance(12, 4, 1), 0.5, 0.7, 4).radius_in_range);
}

TEST_CASE("event probability: determinism and zero stub") {
  const ModelParams params{8, 3, 0.0};
  const auto a = event_probability(params, 0.5, 0.7, 1, 30, 77);
  const auto b = event_probability(params, 0.5, 0.7, 1, 30, 77);
  CHECK(a.estimate == b.estimate);
  CHECK(a.successes == b.successes);
  CHECK(a.ci.lower <= a.estimate);
  CHECK(a.estimate <= a.ci.upper);
  const InstanceFactory zero = [](const ModelParams& p, std::uint64_t) { return DisorderInstance::zero(p); };
  const auto z = event_probability(params, 0.5, 0.7, 1, 10, 1, zero);
  CHECK(z.estimate == 0.0);
  CHECK(z.ci.lower == 0.0);

  const auto rows = sample_events(params, 0.5, 0.7, 1, 5, 77);
  CHECK(rows.size() == 5);
  CHECK(rows[2].seed == derive_seed(77, kDisorderTag, 2));
}

TEST_CASE("second-moment ratio") {
  const InstanceFactory zero = [](const ModelParams& p, std::uint64_t) { return DisorderInstance::zero(p); };
  const auto undefined = second_moment_ratio({8, 3, 0.0}, 0.5, 10, 1, zero);
  CHECK(!undefined.defined);
  CHECK(std::isnan(undefined.estimate));

  const std::vector<double> counts = {0, 3, 5, 0, 7, 1, 0, 2};
  const auto r = second_moment_from_counts(counts, 9);
  double s = 0, ss = 0;
  for (double c : counts) {
    s += c;
    ss += c * c;
  }
  CHECK(r.estimate == doctest::Approx((s / 8) * (s / 8) / (ss / 8)).epsilon(1e-15));
  CHECK(r.estimate <= 1.0);
  CHECK(r.ci.lower <= r.estimate);
  CHECK(r.ci.upper >= r.estimate);
  CHECK(r.ci.upper <= 1.0 + 1e-15);
  const auto again = second_moment_from_counts(counts, 9);
  CHECK(again.ci.lower == r.ci.lower);

  const std::vector<double> constant = {4, 4, 4, 4};
  CHECK(second_moment_from_counts(constant, 1).estimate == doctest::Approx(1.0));

  const auto mc = second_moment_ratio({10, 3, 0.0}, 0.5, 100, 3);
  CHECK(mc.defined);
  CHECK(mc.estimate <= 1.0);
}

TEST_CASE("paley-zygmund") {
  CHECK(paley_zygmund_lower(0.0, 1.0) == 1.0);
  CHECK(paley_zygmund_lower(0.5, 0.8) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(paley_zygmund_lower(1.0, 0.5), Error);
  CHECK_THROWS_AS(paley_zygmund_lower(0.5, 0.0), Error);
  CHECK_THROWS_AS(paley_zygmund_lower(0.5, 1.5), Error);
}

TEST_CASE("union bound equals its prefactor when the bracket vanishes") {
  const int n = 40, p = 10;
  const double eps = 0.05, r = 0.1;
  const double c = correlation(p, r);
  const double b2 = kBetaC * kBetaC;
  const double delta = std::sqrt((2.0 * binary_entropy(r) / b2 + 2.0 * eps * (1.0 - eps / 2.0)) * (1.0 + c) /
                                 ((1.0 - eps) * (1.0 - eps) * (1.0 - c)));
  REQUIRE(delta < 1.0);
  const auto ub = union_bound_rhs(n, p, eps, delta, r);
  CHECK(std::abs(ub.exponent) <= 1e-12);
  CHECK(ub.log_value == doctest::Approx(ub.log_prefactor).epsilon(1e-12));
  const double prefactor = std::sqrt(1.0 + c) / (2.0 * M_PI * n * b2 * (1 - eps) * (1 - eps) * delta * std::sqrt(1.0 - c));
  CHECK(ub.value == doctest::Approx(prefactor).epsilon(1e-12));
  CHECK_THROWS_AS(union_bound_rhs(n, p, eps, delta, 0.5), Error);
  CHECK_THROWS_AS(union_bound_rhs(n, p, 0.0, delta, 0.1), Error);
}

TEST_CASE("union bound decreases in N at the proof parameters") {
  const double eps = 0.1, delta = 0.9;
  const int p = admissible_p(eps, delta);
  const double r = radius(eps, delta, p);
  double prev = union_bound_rhs(10, p, eps, delta, r).log_value;
  for (int n = 11; n <= 2000; ++n) {
    const double cur = union_bound_rhs(n, p, eps, delta, r).log_value;
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(std::isfinite(union_bound_rhs(10000, p, eps, delta, r).log_value));
}
