#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "glassmix/exact.hpp"

using namespace glassmix;

namespace {

// lambda2 by power iteration on (I + D^{1/2} P D^{-1/2}) / 2 restricted to the
// complement of sqrt(pi).
double power_lambda2(const TransitionKernel& k, const GibbsDistribution& pi) {
  const std::size_t m = k.n_states();
  std::vector<double> root(m), v(m), w(m);
  for (std::size_t s = 0; s < m; ++s) root[s] = std::sqrt(pi.probabilities[s]);
  for (std::size_t s = 0; s < m; ++s) v[s] = std::sin(1.0 + 7.3 * s);
  auto project = [&](std::vector<double>& x) {
    double dot = 0.0;
    for (std::size_t s = 0; s < m; ++s) dot += x[s] * root[s];
    for (std::size_t s = 0; s < m; ++s) x[s] -= dot * root[s];
    double norm = 0.0;
    for (double e : x) norm += e * e;
    norm = std::sqrt(norm);
    for (double& e : x) e /= norm;
  };
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t s = 0; s < m; ++s) {
      double acc = k.diagonal(static_cast<State>(s)) * x[s];
      for (int j = 0; j < k.n(); ++j) {
        const std::size_t t = s ^ (std::size_t{1} << j);
        acc += std::sqrt(pi.probabilities[s] / pi.probabilities[t]) * k.neighbor(static_cast<State>(s), j) * x[t];
      }
      y[s] = 0.5 * (x[s] + acc);
    }
  };
  project(v);
  double rayleigh = 0.0;
  for (int it = 0; it < 2000000; ++it) {
    apply(v, w);
    double rq = 0.0;
    for (std::size_t s = 0; s < m; ++s) rq += v[s] * w[s];
    v = w;
    project(v);
    if (std::abs(rq - rayleigh) < 1e-15) {
      rayleigh = rq;
      break;
    }
    rayleigh = rq;
  }
  return 2.0 * rayleigh - 1.0;
}

}  // namespace

TEST_CASE("kernel at beta = 0 and with zero disorder") {
  for (int variant = 0; variant < 2; ++variant) {
    const auto inst = variant == 0 ? fixtures::instance(6, 3, 1) : fixtures::zero(6, 3);
    const auto k = TransitionKernel::build(inst, variant == 0 ? 0.0 : 2.0);
    for (State s = 0; s < 64; ++s) {
      CHECK(k.diagonal(s) == doctest::Approx(0.5).epsilon(1e-15));
      for (int j = 0; j < 6; ++j) CHECK(k.neighbor(s, j) == 1.0 / 12.0);
    }
  }
}

TEST_CASE("kernel entries match transition_probability") {
  const auto inst = fixtures::instance(6, 3, 2);
  const auto k = TransitionKernel::build(inst, 1.0);
  PhiloxEngine rng(3);
  for (int i = 0; i < 100; ++i) {
    const State s = static_cast<State>(rng.below(64));
    const int j = static_cast<int>(rng.below(7));
    const State t = j == 6 ? s : s ^ (State{1} << j);
    const double expect = transition_probability(inst, 1.0, SpinConfiguration(6, s), SpinConfiguration(6, t));
    CHECK(k(s, t) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(k(0, 3) == 0.0);
  CHECK(k.max_row_sum_error() <= 1e-12);
  CHECK(k.min_entry() >= 0.0);
  CHECK_THROWS_AS(TransitionKernel::build(DisorderInstance::zero({15, 2, 0.0}), 1.0), Error);
}

TEST_CASE("gibbs distribution") {
  const auto uni = gibbs_distribution(fixtures::instance(5, 3, 4), 0.0);
  for (double q : uni.probabilities) CHECK(q == doctest::Approx(1.0 / 32).epsilon(1e-14));

  const auto one = gibbs_distribution(fixtures::instance(1, 2, 5), 3.0);
  CHECK(one.probabilities[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.probabilities[1] == doctest::Approx(0.5).epsilon(1e-15));

  const auto inst = fixtures::instance(8, 3, 6);
  const auto pi = gibbs_distribution(inst, 1.0);
  long double z = 0.0L;
  std::vector<long double> w(256);
  for (State s = 0; s < 256; ++s) z += w[s] = std::exp(-1.0L * inst.energy(s));
  double total = 0.0;
  for (State s = 0; s < 256; ++s) {
    CHECK(pi.probabilities[s] == doctest::Approx(static_cast<double>(w[s] / z)).epsilon(1e-12));
    total += pi.probabilities[s];
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);

  // no overflow at very low temperature
  const auto cold = gibbs_distribution(fixtures::instance(10, 3, 7), 500.0);
  double sum = 0.0;
  for (double q : cold.probabilities) {
    REQUIRE(std::isfinite(q));
    sum += q;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("detailed balance and stationarity") {
  const auto flat = fixtures::instance(6, 3, 8);
  const auto k0 = TransitionKernel::build(flat, 0.0);
  CHECK(verify_detailed_balance(k0, gibbs_distribution(flat, 0.0)) <= 1e-15);
  const auto z = fixtures::zero(6, 3);
  CHECK(verify_detailed_balance(TransitionKernel::build(z, 2.0), gibbs_distribution(z, 2.0)) <= 1e-13);

  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto inst = fixtures::instance(8, 3, seed);
    const auto k = TransitionKernel::build(inst, 2.0);
    const auto pi = gibbs_distribution(inst, 2.0);
    CHECK(verify_detailed_balance(k, pi) <= 1e-10);
    CHECK(stationarity_residual(k, pi) <= 1e-11);
  }
  CHECK_THROWS_AS(verify_detailed_balance(k0, gibbs_distribution(fixtures::instance(5, 3, 1), 0.0)), Error);
}

TEST_CASE("spectral gap at beta = 0 equals 1/N") {
  for (int n = 1; n <= 10; ++n) {
    const auto inst = fixtures::instance(n, 3, 20 + n);
    const auto g = spectral_gap(TransitionKernel::build(inst, 0.0), gibbs_distribution(inst, 0.0));
    CHECK(std::abs(g.gap - 1.0 / n) <= 1e-10);
  }
  const auto z = fixtures::zero(7, 3);
  CHECK(std::abs(spectral_gap(TransitionKernel::build(z, 1.0), gibbs_distribution(z, 1.0)).gap - 1.0 / 7) <= 1e-10);
}

TEST_CASE("lambda2 matches power iteration") {
  for (std::uint64_t seed : {30, 31}) {
    const auto inst = fixtures::instance(8, 3, seed);
    const auto k = TransitionKernel::build(inst, 1.5);
    const auto pi = gibbs_distribution(inst, 1.5);
    const auto g = spectral_gap(k, pi);
    CHECK(std::abs(g.lambda2 - power_lambda2(k, pi)) <= 1e-8);
    const auto spectrum = symmetrized_spectrum(k, pi);
    CHECK(spectrum.back() == doctest::Approx(1.0).epsilon(1e-10));
    for (double e : spectrum) {
      CHECK(e >= -1.0 - 1e-10);
      CHECK(e <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("reversibility gate") {
  const auto inst = fixtures::instance(6, 3, 40);
  const auto k = TransitionKernel::build(inst, 2.0);
  const auto wrong = gibbs_distribution(inst, 1.0);
  try {
    spectral_gap(k, wrong);
    FAIL("expected NotReversible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotReversible);
  }
}

TEST_CASE("mixing time of the two-state chain") {
  const auto inst = fixtures::instance(1, 2, 1);
  const auto k = TransitionKernel::build(inst, 0.0);
  const auto pi = gibbs_distribution(inst, 0.0);
  const auto r = exact_mixing_time(k, pi);
  CHECK(r.kind == MixingKind::Exact);
  CHECK(r.t_mix == 1);
  CHECK(r.tv_at_t == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("beta = 0 hypercube envelope") {
  const int n = 10;
  const auto inst = fixtures::instance(n, 3, 2);
  const auto r = exact_mixing_time(TransitionKernel::build(inst, 0.0), gibbs_distribution(inst, 0.0));
  CHECK(r.kind == MixingKind::Exact);
  CHECK(static_cast<double>(r.t_mix) <= 4.0 * n * std::log(4.0 * n));
  CHECK(static_cast<double>(r.t_mix) >= n / 2.0);
}

TEST_CASE("squaring agrees with step-by-step evolution") {
  for (double beta : {0.3, 1.0, 2.0}) {
    for (std::uint64_t seed : {50, 51}) {
      const auto inst = fixtures::instance(6, 3, seed);
      const auto k = TransitionKernel::build(inst, beta);
      const auto pi = gibbs_distribution(inst, beta);
      const auto fast = exact_mixing_time(k, pi, 100000);
      const auto slow = mixing_time_by_evolution(k, pi, 100000);
      CHECK(fast.kind == slow.kind);
      CHECK(fast.t_mix == slow.t_mix);
      CHECK(fast.tv_at_t == doctest::Approx(slow.tv_at_t).epsilon(1e-9));

      const auto profile = tv_profile(k, pi, fast.t_mix);
      CHECK(profile[fast.t_mix] <= 0.25);
      if (fast.t_mix > 0) CHECK(profile[fast.t_mix - 1] > 0.25);
      for (std::size_t t = 1; t < profile.size(); ++t) CHECK(profile[t] <= profile[t - 1] + 1e-12);
    }
  }
}

TEST_CASE("capped result is consistent with d(cap) > 1/4") {
  const auto inst = fixtures::instance(6, 3, 60);
  const auto k = TransitionKernel::build(inst, 3.0);
  const auto pi = gibbs_distribution(inst, 3.0);
  const std::uint64_t cap = 5;
  const auto r = exact_mixing_time(k, pi, cap);
  const auto profile = tv_profile(k, pi, cap);
  if (profile[cap] > 0.25) {
    CHECK(r.kind == MixingKind::CappedLowerBound);
    CHECK(r.t_mix == cap);
  } else {
    CHECK(r.kind == MixingKind::Exact);
  }
  CHECK_THROWS_AS(exact_mixing_time(TransitionKernel::build(fixtures::zero(13, 2), 0.0),
                                    gibbs_distribution(fixtures::zero(13, 2), 0.0)),
                  Error);
}

TEST_CASE("spectral sandwich") {
  const std::vector<double> flat = {0.0, 0.0};
  const auto two = GibbsDistribution::from_energies(flat, 0.0);
  const auto s = spectral_sandwich(1.0, two);
  CHECK(s.lower == 0.0);
  CHECK(s.upper == doctest::Approx(std::log(8.0)).epsilon(1e-15));

  const int n = 8;
  const auto inst = fixtures::instance(n, 3, 70);
  const auto pi0 = gibbs_distribution(inst, 0.0);
  const auto s0 = spectral_sandwich(1.0 / n, pi0);
  CHECK(s0.lower == doctest::Approx(std::numbers::ln2 * (n - 1)).epsilon(1e-14));
  CHECK(s0.upper == doctest::Approx((std::log(4.0) + n * std::numbers::ln2) * n).epsilon(1e-14));
  CHECK_THROWS_AS(spectral_sandwich(0.0, pi0), Error);

  for (std::uint64_t seed = 71; seed < 76; ++seed) {
    const auto i8 = fixtures::instance(n, 3, seed);
    const auto k = TransitionKernel::build(i8, 1.0);
    const auto pi = gibbs_distribution(i8, 1.0);
    const auto g = spectral_gap(k, pi);
    const auto sw = spectral_sandwich(g.gap, pi);
    const auto mix = exact_mixing_time(k, pi);
    REQUIRE(mix.kind == MixingKind::Exact);
    CHECK(sw.lower <= static_cast<double>(mix.t_mix));
    CHECK(static_cast<double>(mix.t_mix) <= sw.upper);
  }
}
