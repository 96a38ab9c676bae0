#include "bandit_debias/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <omp.h>

#include "bandit_debias/config.hpp"
#include "bandit_debias/debias.hpp"
#include "bandit_debias/errors.hpp"
#include "bandit_debias/estimators.hpp"
#include "bandit_debias/harness.hpp"
#include "bandit_debias/io.hpp"
#include "bandit_debias/simulator.hpp"

namespace bdb {

namespace fs = std::filesystem;

namespace {

int default_workers() {
  if (const char* env = std::getenv("BANDIT_DEBIAS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    throw ConfigError("BANDIT_DEBIAS_WORKERS must be a positive integer");
  }
  return omp_get_num_procs();
}

fs::path require_file(const std::string& p, const char* flag) {
  const fs::path path = fs::absolute(p);
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + ": no such file: " + p);
  return path;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  int verbosity = 0;

  std::uint64_t require_seed() const {
    if (!seed) throw ConfigError("--seed is required");
    return *seed;
  }
  int resolved_workers() const { return workers ? *workers : default_workers(); }
};

void add_common(CLI::App* app, Common& c, bool with_workers) {
  app->add_option("--seed", c.seed, "Random seed (all randomness derives from it)");
  if (with_workers) {
    app->add_option("--workers", c.workers, "Worker threads (default: $BANDIT_DEBIAS_WORKERS or #cores)")
        ->check(CLI::PositiveNumber);
  }
  app->add_flag("-v,--verbose", c.verbosity, "Log progress to stderr");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bootstrap debiasing of sample means from bandit experiments"};
  app.name("bandit-debias");
  app.require_subcommand(1);

  Common common;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one bandit experiment and write a log");
  std::string policy_name_opt, arms_path, sim_out, sim_meta;
  int etc_m = 10;
  double epsilon = 0.05, prior_mean = 0.0, prior_var = 1.0, lik_var = 1.0;
  std::size_t K = 0, T = 0;
  sim->add_option("--policy", policy_name_opt, "etc | ucb | ts | eg")->required();
  sim->add_option("--m", etc_m, "ETC exploration pulls per arm");
  sim->add_option("--epsilon", epsilon, "EG exploration probability");
  sim->add_option("--prior-mean", prior_mean, "TS prior mean");
  sim->add_option("--prior-variance", prior_var, "TS prior variance");
  sim->add_option("--likelihood-variance", lik_var, "TS likelihood variance");
  sim->add_option("--K", K, "Number of arms")->required();
  sim->add_option("--T", T, "Horizon")->required();
  sim->add_option("--arms", arms_path, "JSON array of arm distributions")->required();
  sim->add_option("--out", sim_out, "Output CSV log")->required();
  sim->add_option("--meta", sim_meta, "Metadata sidecar (default: <out>.meta.json)");
  add_common(sim, common, false);

  // debias
  auto* deb = app.add_subcommand("debias", "Bootstrap bias correction of a log");
  std::string log_path, meta_path, boot = "mb", deb_out;
  std::size_t B = 1000;
  deb->add_option("--log", log_path, "CSV log")->required();
  deb->add_option("--meta", meta_path, "Metadata sidecar (default: <log>.meta.json)");
  deb->add_option("--bootstrap", boot, "mb | efron")->check(CLI::IsMember({"mb", "efron"}));
  deb->add_option("--B", B, "Bootstrap replays")->check(CLI::PositiveNumber);
  deb->add_option("--out", deb_out, "Output report JSON")->required();
  add_common(deb, common, true);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Sample mean, IPW and AIPW estimates of a log");
  std::string ev_log, ev_meta, ev_out, estimators = "mean,ipw,aipw";
  bool trace = false;
  ev->add_option("--log", ev_log, "CSV log")->required();
  ev->add_option("--meta", ev_meta, "Metadata sidecar (default: <log>.meta.json)");
  ev->add_option("--estimators", estimators, "Comma-separated subset of mean,ipw,aipw");
  ev->add_flag("--trace", trace, "Include the per-round propensity trace");
  ev->add_option("--out", ev_out, "Output JSON")->required();
  add_common(ev, common, false);

  // theory
  auto* th = app.add_subcommand("theory", "Exact and asymptotic bias oracles");
  std::string th_config, th_out;
  th->add_option("--config", th_config, "Theory config JSON")->required();
  th->add_option("--out", th_out, "Output JSON")->required();
  add_common(th, common, true);

  // plan
  auto* pl = app.add_subcommand("plan", "Run a replicated experiment plan");
  std::string plan_path, plan_out = "results";
  pl->add_option("--plan", plan_path, "Plan JSON")->required();
  pl->add_option("--out", plan_out, "Results directory");
  add_common(pl, common, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  auto say = [&](const std::string& msg) {
    if (common.verbosity > 0) err << msg << "\n";
  };

  try {
    if (*sim) {
      const std::uint64_t seed = common.require_seed();
      const auto arms = arms_from_json(read_json(require_file(arms_path, "--arms")));
      if (arms.size() != K) throw ConfigError("--K does not match the number of arms in --arms");
      nlohmann::json pj{{"name", policy_name_opt}};
      if (policy_name_opt == "etc") pj["m"] = etc_m;
      if (policy_name_opt == "eg") pj["epsilon"] = epsilon;
      if (policy_name_opt == "ts") {
        pj["prior_mean"] = prior_mean;
        pj["prior_variance"] = prior_var;
        pj["likelihood_variance"] = lik_var;
      }
      const PolicySpec policy = policy_from_json(pj);
      const fs::path csv = fs::absolute(sim_out);
      const fs::path meta = sim_meta.empty() ? sidecar_path(csv) : fs::absolute(sim_meta);
      const auto log = run_experiment(K, T, policy, arms, seed);
      write_log(log, csv, meta);
      say("wrote " + csv.string() + " and " + meta.string());
      return 0;
    }
    if (*deb) {
      const std::uint64_t seed = common.require_seed();
      const int workers = common.resolved_workers();
      const fs::path csv = require_file(log_path, "--log");
      const fs::path meta = require_file(meta_path.empty() ? sidecar_path(csv).string() : meta_path, "--meta");
      const fs::path dest = fs::absolute(deb_out);
      const auto log = read_log(csv, meta);
      const BootstrapSpec spec{bootstrap_kind_from_string(boot), B};
      say("debiasing with B=" + std::to_string(B) + " on " + std::to_string(workers) + " workers");
      const auto report = debias(log, spec, seed, DebiasOptions{0, workers});
      write_file_atomic(dest, dump_json(to_json(report)));
      report.require_defined();
      return 0;
    }
    if (*ev) {
      const std::uint64_t seed = common.require_seed();
      const fs::path csv = require_file(ev_log, "--log");
      const fs::path meta = require_file(ev_meta.empty() ? sidecar_path(csv).string() : ev_meta, "--meta");
      const fs::path dest = fs::absolute(ev_out);
      const auto which = parse_estimators(estimators);
      const auto log = read_log(csv, meta);
      const auto set = estimate(log, seed, 0, which);
      write_file_atomic(dest, dump_json(to_json(set, trace)));
      return 0;
    }
    if (*th) {
      const std::uint64_t seed = common.require_seed();
      const int workers = common.resolved_workers();
      const auto config = read_json(require_file(th_config, "--config"));
      const fs::path dest = fs::absolute(th_out);
      write_file_atomic(dest, dump_json(run_theory(config, seed, workers)));
      return 0;
    }
    if (*pl) {
      const std::uint64_t seed = common.require_seed();
      const int workers = common.resolved_workers();
      auto plan = plan_from_json(read_json(require_file(plan_path, "--plan")));
      plan.master_seed = seed;
      const fs::path dir = fs::absolute(plan_out);
      for (std::size_t i = 0; i < plan.cells.size(); ++i) {
        say("cell " + plan.cells[i].name);
        const auto result = run_cell(plan.cells[i], cell_seed(plan.master_seed, i), workers);
        write_cell(result, dir);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace bdb
