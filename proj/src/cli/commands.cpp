#include "glassmix/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "glassmix/bottleneck.hpp"
#include "glassmix/cli/manifest.hpp"
#include "glassmix/dynamics.hpp"
#include "glassmix/exact.hpp"
#include "glassmix/geometry.hpp"
#include "glassmix/io.hpp"
#include "glassmix/landscape.hpp"
#include "glassmix/parallel.hpp"
#include "glassmix/rng.hpp"
#include "glassmix/theory.hpp"

namespace glassmix::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ModelParams model_params(const Config& c) { return {c.n, c.p, c.beta}; }

DisorderInstance make_instance(const Config& c, std::uint64_t seed) {
  const ModelParams params = model_params(c);
  if (c.disorder == "zero") {
    return DisorderInstance::zero(
        params, c.repr == "auto" ? default_representation(c.n, c.p) : representation_from_string(c.repr));
  }
  if (c.repr == "auto") return DisorderInstance::sample(params, seed);
  return DisorderInstance::sample(params, seed, representation_from_string(c.repr));
}

std::uint64_t instance_seed(const Config& c, std::size_t i) { return derive_seed(c.seed, kDisorderTag, i); }

std::string numbered(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval_json(const Interval& ci) { return {{"lower", ci.lower}, {"upper", ci.upper}}; }

json proportion_json(const ProportionEstimate& e) {
  return {{"estimate", e.estimate}, {"successes", e.successes}, {"trials", e.trials}, {"ci95", interval_json(e.ci)}};
}

// Prepares the output directory and writes the incomplete manifest.
class Run {
 public:
  Run(const char* command, const Config& config) : dir_(config.out), manifest_(RunManifest::begin(command, config)) {
    validate(config);
    set_thread_count(config.threads);
    fs::create_directories(dir_);
    manifest_.write(dir_);
  }

  json& extra() { return manifest_.extra; }

  void write(const std::string& name, std::string_view text) {
    io::write_text(dir_ / name, text);
    manifest_.output_paths.push_back((dir_ / name).string());
  }

  void finish() {
    manifest_.complete = true;
    manifest_.write(dir_);
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

}  // namespace

int cmd_simulate(const Config& config, std::ostream& log) {
  Run run("simulate", config);
  const std::size_t runs = config.runs;
  std::vector<std::optional<TrajectorySummary>> results(runs);
  std::vector<std::uint64_t> traj_seeds(runs);
  json seeds = json::array();
  for (std::size_t i = 0; i < runs; ++i) {
    traj_seeds[i] = derive_seed(config.seed, kTrajectoryTag, i);
    seeds.push_back({{"instance_seed", instance_seed(config, i)}, {"trajectory_seed", traj_seeds[i]}});
  }
  run.extra()["runs"] = seeds;
  run.extra()["beta"] = config.beta;
  run.extra()["horizon"] = config.horizon;

  parallel_for(runs, [&](std::size_t i) {
    const DisorderInstance inst = make_instance(config, instance_seed(config, i));
    PhiloxEngine rng(traj_seeds[i]);
    const SpinConfiguration start(config.n, static_cast<State>(rng() & full_mask(config.n)));
    results[i] = simulate(inst, config.beta, start, config.horizon, config.subsample, rng);
  });

  for (std::size_t i = 0; i < runs; ++i) {
    std::ostringstream csv;
    io::CsvWriter w(csv, {"step", "energy"});
    const auto& r = *results[i];
    for (std::size_t s = 0; s < r.sample_steps.size(); ++s) {
      w.field(r.sample_steps[s]).field(r.energy_series[s]);
      w.end_row();
    }
    run.write(numbered("trajectory", i, "csv"), csv.str());
  }

  if (config.beta == 0.0 && config.horizon > 0) {
    // At beta = 0 the chain is a lazy walk with uniform stationary law; started
    // from a uniform state the time-averaged magnetization has mean 0 and
    // variance N (2N - 1) / T to leading order.
    const double n = config.n;
    const double se = std::sqrt(n * (2.0 * n - 1.0) / static_cast<double>(config.horizon));
    json zs = json::array();
    bool passed = true;
    for (const auto& r : results) {
      const double z = r->magnetization_time_average / se;
      zs.push_back(z);
      passed = passed && std::abs(z) <= 5.0;
    }
    run.extra()["uniformity_check"] = {{"passed", passed}, {"z_scores", zs}, {"threshold", 5.0}};
    log << "uniformity check: " << (passed ? "passed" : "FAILED") << "\n";
    run.finish();
    require(passed, ErrorKind::NumericGate, "beta = 0 uniformity check failed");
    return kExitOk;
  }
  run.finish();
  return kExitOk;
}

int cmd_spectrum(const Config& config, std::ostream& log) {
  require(config.n <= kMaxKernelSpins, ErrorKind::CapacityExceeded, "spectrum requires N <= 14");
  Run run("spectrum", config);
  for (std::size_t i = 0; i < config.instances; ++i) {
    const std::uint64_t seed = instance_seed(config, i);
    const DisorderInstance inst = make_instance(config, seed);
    const auto pi = gibbs_distribution(inst, config.beta);
    const auto kernel = TransitionKernel::build(inst, config.beta);
    const auto gap = spectral_gap(kernel, pi);
    json report{{"schema", io::kSchema},
                {"n", config.n},
                {"p", config.p},
                {"beta", config.beta},
                {"seed", seed},
                {"lambda2", gap.lambda2},
                {"gap", gap.gap},
                {"lambda_min", gap.lambda_min},
                {"tmix_kind", "unavailable"},
                {"tmix", nullptr},
                {"tv_lower", nullptr},
                {"tv_upper", nullptr}};
    if (gap.gap > 0.0) {
      const auto sandwich = spectral_sandwich(gap.gap, pi);
      report["tv_lower"] = finite_or_null(sandwich.lower);
      report["tv_upper"] = finite_or_null(sandwich.upper);
    }
    if (config.n <= kMaxMixingSpins) {
      const auto mix = exact_mixing_time(kernel, pi, config.mixing_cap);
      report["tmix_kind"] = io::to_string(mix.kind);
      report["tmix"] = mix.t_mix;
    }
    log << "instance " << i << ": gap " << io::format_double(gap.gap) << "\n";
    run.write(numbered("spectrum", i, "json"), report.dump(2) + "\n");
  }
  run.finish();
  return kExitOk;
}

int cmd_certify(const Config& config, std::ostream& log) {
  require(config.n <= kMaxKernelSpins, ErrorKind::CapacityExceeded, "certify requires N <= 14");
  const double eps = config.eps.empty() ? 0.5 : config.eps.front();
  Run run("certify", config);
  const auto radii = default_radii(
      config.n, config.radius_range == "definition" ? RadiusRange::Definition : RadiusRange::Corollary);
  json results = json::array();
  bool any_empty = false;
  for (std::size_t i = 0; i < config.instances; ++i) {
    const std::uint64_t seed = instance_seed(config, i);
    const DisorderInstance inst = make_instance(config, seed);
    const auto table = energy_table(inst);
    const auto pi = GibbsDistribution::from_energies(table, config.beta);
    const auto kernel = TransitionKernel::from_energies(table, config.n, config.beta);
    const auto deep = deep_states(table, config.n, eps);
    json entry{{"seed", seed}, {"deep_count", deep.size()}};
    std::optional<BoundCertificate> cert;
    if (deep.size() == 0) {
      entry["status"] = "no_deep_centers";
    } else {
      try {
        cert = ball_scan(inst, kernel, pi, deep.members, radii);
        entry["status"] = "certified";
        entry["certificate"] = io::certificate_to_json(*cert);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoValidSet) throw;
        entry["status"] = "no_valid_set";
      }
    }
    if (!cert) {
      any_empty = true;
      log << "instance " << i << ": " << entry["status"].get<std::string>() << "\n";
      results.push_back(entry);
      continue;
    }
    if (config.n <= kMaxMixingSpins) {
      const auto mix = exact_mixing_time(kernel, pi, config.mixing_cap);
      entry["tmix_kind"] = io::to_string(mix.kind);
      entry["tmix"] = mix.t_mix;
      if (mix.kind == MixingKind::Exact) {
        entry["verdict"] = static_cast<double>(mix.t_mix) >= cert->tmix_lower ? "valid" : "violated";
      } else {
        entry["verdict"] = "capped";
      }
    } else {
      entry["verdict"] = "unavailable";
    }
    log << "instance " << i << ": tmix_lower " << io::format_double(cert->tmix_lower) << " verdict "
        << entry["verdict"].get<std::string>() << "\n";
    results.push_back(entry);
  }
  json doc{{"schema", io::kSchema},
           {"n", config.n},
           {"p", config.p},
           {"beta", config.beta},
           {"eps", eps},
           {"radii", radii},
           {"results", results}};
  run.write("certify.json", doc.dump(2) + "\n");
  run.finish();
  return any_empty ? kExitEmpty : kExitOk;
}

int cmd_landscape(const Config& config, std::ostream& log) {
  require(config.n <= kMaxTableSpins, ErrorKind::CapacityExceeded, "landscape requires N <= 20");
  const std::vector<double> eps_grid = config.eps.empty() ? std::vector<double>{0.5} : config.eps;
  const std::vector<double> delta_grid = config.delta.empty() ? std::vector<double>{0.7} : config.delta;
  for (int k : config.k)
    require(2 * k <= config.n, ErrorKind::InvalidParams, "landscape requires 2k <= N for every k");
  Run run("landscape", config);

  struct Point {
    double eps, delta;
    int k;
  };
  std::vector<Point> grid;
  for (double e : eps_grid)
    for (double d : delta_grid)
      for (int k : config.k) grid.push_back({e, d, k});

  const std::size_t samples = config.samples;
  std::vector<std::vector<EventReport>> reports(samples);
  std::vector<std::uint64_t> seeds(samples);
  parallel_for(samples, [&](std::size_t i) {
    seeds[i] = instance_seed(config, i);
    const DisorderInstance inst = make_instance(config, seeds[i]);
    const auto table = energy_table(inst);
    for (const auto& g : grid) {
      auto r = check_event(table, config.n, config.p, g.eps, g.delta, g.k);
      r.per_center_min_g.clear();
      reports[i].push_back(std::move(r));
    }
  });

  std::ostringstream csv;
  io::CsvWriter w(csv, {"seed", "n", "p", "eps", "delta", "k", "part1", "part2", "min_G", "deep_count"});
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto& r = reports[i][g];
      w.field(seeds[i]).field(config.n).field(config.p).field(r.eps).field(r.delta).field(r.k);
      w.field(r.part1).field(r.part2).field(r.min_g).field(static_cast<std::uint64_t>(r.deep_count));
      w.end_row();
    }
  }
  run.write("events.csv", csv.str());

  json points = json::array();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& pt = grid[g];
    std::size_t both = 0, part1 = 0, violations = 0;
    std::vector<double> counts(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto& r = reports[i][g];
      both += r.holds() ? 1 : 0;
      part1 += r.part1 ? 1 : 0;
      violations += r.part2 ? 0 : 1;
      counts[i] = static_cast<double>(r.deep_count);
    }
    const auto event = proportion(both, samples);
    const auto p1 = proportion(part1, samples);
    const auto p2v = proportion(violations, samples);
    const double r = static_cast<double>(pt.k) / config.n;

    json union_json = nullptr;
    if (r < 0.5) {
      const auto ub = union_bound_rhs(config.n, config.p, pt.eps, pt.delta, r);
      union_json = {{"bound", finite_or_null(ub.value)},
                    {"log_bound", ub.log_value},
                    {"empirical_violation", proportion_json(p2v)},
                    {"dominance_holds", p2v.ci.lower <= ub.value}};
    }

    const auto sm = second_moment_from_counts(counts, config.seed);
    const std::uint64_t vol = ball_volume(config.n, 2 * pt.k);
    json pz_json{{"second_moment_ratio", sm.defined ? json(sm.estimate) : json(nullptr)},
                 {"second_moment_ci95", sm.defined ? interval_json(sm.ci) : json(nullptr)},
                 {"mean_deep_count", sm.mean},
                 {"empirical_part1", proportion_json(p1)}};
    if (sm.defined) {
      const double theta_hat = static_cast<double>(vol) / sm.mean;
      const double lower = theta_hat < 1.0 ? paley_zygmund_lower(theta_hat, sm.estimate) : 0.0;
      const double lower_ci = theta_hat < 1.0 ? paley_zygmund_lower(theta_hat, std::max(sm.ci.lower, 1e-300)) : 0.0;
      pz_json["theta_hat"] = theta_hat;
      pz_json["pz_lower"] = lower;
      pz_json["consistent"] = p1.ci.upper >= lower_ci;
    }
    if (4 * pt.k <= config.n) pz_json["theta_theory"] = theta(config.n, pt.eps, pt.k).value;

    points.push_back({{"eps", pt.eps},
                      {"delta", pt.delta},
                      {"k", pt.k},
                      {"radius_in_range", 4 * pt.k <= config.n},
                      {"event", proportion_json(event)},
                      {"union_bound", union_json},
                      {"paley_zygmund", pz_json},
                      {"expected_deep_count", expected_deep_count(config.n, pt.eps).exact}});
    log << "eps " << pt.eps << " delta " << pt.delta << " k " << pt.k << ": P(event) "
        << io::format_double(event.estimate) << "\n";
  }
  json summary{{"schema", io::kSchema},
               {"n", config.n},
               {"p", config.p},
               {"samples", samples},
               {"master_seed", config.seed},
               {"grid", points}};
  run.write("summary.json", summary.dump(2) + "\n");
  run.finish();
  return kExitOk;
}

int cmd_theory(const Config& config, std::ostream& log) {
  const std::vector<double> eps_grid = config.eps.empty() ? std::vector<double>{0.01, 0.05, 0.1} : config.eps;
  const std::vector<double> delta_grid = config.delta.empty() ? std::vector<double>{0.9} : config.delta;
  for (double e : eps_grid) {
    for (double d : delta_grid) {
      const auto x = x_param(e, d);
      if (!x.valid) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "x ≥ 1 for eps = %g, delta = %g (x = %.17g)", e, d, x.value);
        fail(ErrorKind::InvalidX, buf);
      }
    }
  }
  Run run("theory", config);

  std::ostringstream csv;
  io::CsvWriter w(csv, {"eps", "delta", "p", "beta_c", "beta_sh", "beta_cutoff", "C_eps_delta"});
  json constants = json::array();
  for (double e : eps_grid) {
    for (double d : delta_grid) {
      const double c = asymptotic_constant(e, d);
      const int p_min = admissible_p(e, d);
      for (int p : config.p_grid) {
        w.field(e).field(d).field(p).field(kBetaC).field(reference_temperatures(p).beta_sh);
        if (p >= p_min) {
          w.field(beta_cutoff(e, d, p));
        } else {
          w.field(std::string_view{});
        }
        w.field(c);
        w.end_row();
      }
      json opt = nullptr;
      try {
        const auto o = optimize_constant(e);
        opt = {{"delta_prescribed", o.delta_prescribed},
               {"c_prescribed", o.c_prescribed},
               {"delta_refined", o.delta_refined},
               {"c_refined", o.c_refined}};
      } catch (const Error&) {
      }
      constants.push_back({{"eps", e},
                           {"delta", d},
                           {"x", x_param(e, d).value},
                           {"admissible_p", p_min},
                           {"r_at_admissible_p", radius(e, d, p_min)},
                           {"beta_cutoff_at_admissible_p", beta_cutoff(e, d, p_min)},
                           {"C_eps_delta", c},
                           {"optimum", opt}});
      log << "eps " << e << " delta " << d << ": C " << io::format_double(c) << " admissible p " << p_min << "\n";
    }
  }
  run.write("threshold.csv", csv.str());
  json report{{"schema", io::kSchema},
              {"beta_c", kBetaC},
              {"c_floor", 1.0 / (2.0 * kBetaC)},
              {"beta_sh_corrections_omitted", true},
              {"constants", constants}};
  run.write("constants.json", report.dump(2) + "\n");
  run.finish();
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams:
    case ErrorKind::DomainError:
    case ErrorKind::InvalidX:
    case ErrorKind::NotAdmissible:
      return kExitConfig;
    case ErrorKind::CapacityExceeded:
    case ErrorKind::Overflow:
      return kExitCapacity;
    case ErrorKind::NumericGate:
    case ErrorKind::NotReversible:
      return kExitNumericGate;
    case ErrorKind::NoValidSet:
      return kExitEmpty;
    default:
      return kExitFailure;
  }
}

int run_command(const std::string& name, const Config& config, std::ostream& log, std::ostream& err) {
  try {
    if (name == "simulate") return cmd_simulate(config, log);
    if (name == "spectrum") return cmd_spectrum(config, log);
    if (name == "certify") return cmd_certify(config, log);
    if (name == "landscape") return cmd_landscape(config, log);
    if (name == "theory") return cmd_theory(config, log);
    err << "unknown command " << name << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"glassmix: exact and Monte Carlo experiments on Glauber dynamics for p-spin glasses"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> n, p;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed, horizon, subsample, cap;
  std::optional<std::size_t> runs, instances, samples;
  std::optional<unsigned> threads;
  std::optional<std::string> out, repr, radius_range, disorder;
  std::vector<double> eps, delta;
  std::vector<int> k, p_grid;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "run heat-bath trajectories"},
      {"spectrum", "spectral gap, exact mixing time and sandwich (N <= 14)"},
      {"certify", "bottleneck certificates around deep states"},
      {"landscape", "Monte Carlo over disorder for the landscape event"},
      {"theory", "closed-form thresholds and constants"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--threads", threads, "worker threads (0: hardware)");
    sub->add_option("--out", out, "output directory (GLASSMIX_OUT overrides)");
    sub->add_option("--n", n);
    sub->add_option("--p", p);
    sub->add_option("--beta", beta);
    sub->add_option("--repr", repr);
    sub->add_option("--disorder", disorder);
    sub->add_option("--horizon", horizon);
    sub->add_option("--subsample", subsample);
    sub->add_option("--runs", runs);
    sub->add_option("--instances", instances);
    sub->add_option("--mixing-cap", cap);
    sub->add_option("--radius-range", radius_range);
    sub->add_option("--eps", eps)->delimiter(',');
    sub->add_option("--delta", delta)->delimiter(',');
    sub->add_option("--k", k)->delimiter(',');
    sub->add_option("--samples", samples);
    sub->add_option("--p-grid", p_grid)->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Config config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (n) config.n = *n;
  if (p) config.p = *p;
  if (beta) config.beta = *beta;
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  if (out) config.out = *out;
  if (repr) config.repr = *repr;
  if (disorder) config.disorder = *disorder;
  if (horizon) config.horizon = *horizon;
  if (subsample) config.subsample = *subsample;
  if (runs) config.runs = *runs;
  if (instances) config.instances = *instances;
  if (cap) config.mixing_cap = *cap;
  if (radius_range) config.radius_range = *radius_range;
  if (!eps.empty()) config.eps = eps;
  if (!delta.empty()) config.delta = delta;
  if (!k.empty()) config.k = k;
  if (samples) config.samples = *samples;
  if (!p_grid.empty()) config.p_grid = p_grid;
  if (const char* env = std::getenv("GLASSMIX_OUT"); env != nullptr && *env != '\0') config.out = env;

  return run_command(command, config, std::cout, std::cerr);
}

}  // namespace glassmix::cli
