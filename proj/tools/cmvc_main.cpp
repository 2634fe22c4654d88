// Continual multi-view clustering front end: stream ingestion, filtered
// structural fusion, ablations, CFP traces and bound verifiers.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmvc/concentration.hpp"
#include "cmvc/csv.hpp"
#include "cmvc/error.hpp"
#include "cmvc/log.hpp"
#include "cmvc/pipeline.hpp"
#include "cmvc/structural_buffer.hpp"
#include "cmvc/verifiers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInvariant = 4;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> views;
  std::string labels;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<std::string> strategy;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* c = cmd->add_option("--config", args.config_path, "run config JSON");
  if (config_required) c->required();
  cmd->add_option("--views", args.views, "view CSV path (repeatable, stream order)");
  cmd->add_option("--labels", args.labels, "ground-truth labels file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed override");
  cmd->add_option("--lambda", args.lambda, "lambda override");
  cmd->add_option("--strategy", args.strategy, "pair strategy: FSF IMVC G S K RS");
  cmd->add_option("--jobs", args.jobs, "max concurrent trials")->check(CLI::PositiveNumber);
}

cmvc::RunConfig resolve_config(const CommonArgs& args) {
  cmvc::RunConfig cfg;
  if (!args.config_path.empty()) cfg = cmvc::load_config(args.config_path);
  if (!args.views.empty()) {
    cfg.view_paths = args.views;
    cfg.synthetic.reset();
  }
  if (!args.labels.empty()) cfg.labels_path = args.labels;
  if (args.seed) {
    cfg.seed = *args.seed;
    if (cfg.synthetic) cfg.synthetic->seed = *args.seed;
  }
  if (args.lambda) cfg.lambda = *args.lambda;
  if (args.strategy) cfg.strategy = cmvc::parse_strategy(*args.strategy);
  cfg.validate();
  return cfg;
}

void write_outputs(const fs::path& out_dir, const cmvc::ContinualResult& res,
                   const cmvc::RunConfig& cfg) {
  fs::create_directories(out_dir);
  cmvc::write_report_json((out_dir / "report.json").string(), res.report, cfg);
  cmvc::write_objective_trace_csv((out_dir / "objective_trace.csv").string(), res.report);
  cmvc::write_cfp_trace_csv((out_dir / "cfp_trace.csv").string(), res.report);
  cmvc::save_buffer((out_dir / "buffer.txt").string(), res.state.buffer);
  cmvc::write_matrix_csv((out_dir / "consensus.csv").string(), res.state.consensus);
}

void print_summary(const cmvc::Report& report) {
  std::printf("strategy=%s lambda=%g views=%d pairs=%zu conflicts=%zu\n", report.strategy.c_str(),
              report.lambda, report.views, report.buffer.pair_count,
              report.buffer.conflicts_resolved);
  for (const auto& pm : report.prefix) {
    if (report.metrics_available) {
      std::printf("  prefix %d: ACC=%.4f NMI=%.4f purity=%.4f", pm.view, pm.fused.acc,
                  pm.fused.nmi, pm.fused.purity);
      if (pm.each) std::printf("  (each: ACC=%.4f)", pm.each->acc);
      std::printf("\n");
    } else {
      std::printf("  prefix %d: objective=%.6f\n", pm.view,
                  report.traces[pm.view - 1].objective.back());
    }
  }
}

int cmd_run(const CommonArgs& args, bool force_each) {
  cmvc::RunConfig cfg = resolve_config(args);
  if (force_each) cfg.compute_each = true;
  cmvc::LoadedStream stream = cmvc::load_stream(cfg);

  if (!cfg.lambda_grid.empty()) {
    if (!stream.labels) throw cmvc::DataError("lambda grid needs labels to rank cells");
    auto cells = cmvc::run_lambda_grid(stream.views, *stream.labels, cfg, args.jobs);
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].final_metrics.acc > cells[best].final_metrics.acc) best = i;
    std::printf("lambda grid (%zu cells):\n", cells.size());
    for (const auto& cell : cells)
      std::printf("  lambda=%-10g final ACC=%.4f NMI=%.4f purity=%.4f\n", cell.lambda,
                  cell.final_metrics.acc, cell.final_metrics.nmi, cell.final_metrics.purity);
    fs::create_directories(args.out_dir);
    cmvc::write_lambda_grid_csv((fs::path(args.out_dir) / "lambda_grid.csv").string(), cells);
    cfg.lambda = cells[best].lambda;
    cfg.lambda_grid.clear();
    std::printf("best lambda=%g\n", cfg.lambda);
  }

  cmvc::ContinualResult res = cmvc::run_continual(stream.views, stream.labels, cfg);
  write_outputs(args.out_dir, res, cfg);
  print_summary(res.report);
  return 0;
}

int cmd_synth(const CommonArgs& args) {
  cmvc::RunConfig cfg = resolve_config(args);
  if (!cfg.synthetic) throw cmvc::ConfigError("synth: config has no synthetic block");
  cmvc::SyntheticStream stream = cmvc::generate_synthetic_stream(*cfg.synthetic);
  fs::create_directories(args.out_dir);
  for (const auto& view : stream.views) {
    fs::path p = fs::path(args.out_dir) / ("view_" + std::to_string(view.view_index) + ".csv");
    cmvc::write_matrix_csv(p.string(), view.data);
  }
  cmvc::write_labels((fs::path(args.out_dir) / "labels.csv").string(), stream.labels);
  std::printf("wrote %zu views and labels to %s\n", stream.views.size(), args.out_dir.c_str());
  return 0;
}

struct VerifyArgs {
  std::string kind;
  int n = 10000;
  int r = 100;
  double delta = 0.05;
  long long trials = 10000;
  int instances = 100;
  int k = 5;
  int q_samples = 10000;
  int streams = 20;
  int max_outer = 50;
  double lambda = 0.5;
  double tol = 1e-10;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& v) {
  using cmvc::VerifyResult;
  VerifyResult res;
  if (v.kind == "mean_bound" || v.kind == "std_bound") {
    std::mt19937_64 gen(cmvc::derive_seed(v.seed, 0x706f70));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> population(v.n);
    for (double& x : population) x = unit(gen);
    if (v.kind == "mean_bound") {
      cmvc::BoundCheck check = cmvc::verify_mean_bound(population, v.r, v.delta, v.trials, v.seed);
      res.pass = check.rate() <= v.delta;
      res.detail = "mean_bound: rate " + std::to_string(check.rate()) + " vs delta " +
                   std::to_string(v.delta) + " (bound " + std::to_string(check.bound) + ")";
    } else {
      cmvc::BoundCheck check = cmvc::verify_std_bound(population, v.r, v.delta, v.trials, v.seed);
      res.pass = check.rate() <= 2 * v.delta;
      res.detail = "std_bound: rate " + std::to_string(check.rate()) + " vs 2*delta " +
                   std::to_string(2 * v.delta) + " (bound " + std::to_string(check.bound) + ")";
    }
  } else if (v.kind == "cs_bound") {
    res = cmvc::verify_cs_bound(v.instances, 100, 1e-12, v.seed);
  } else if (v.kind == "procrustes") {
    res = cmvc::verify_procrustes(v.instances, v.k, v.q_samples, v.tol, v.seed);
  } else if (v.kind == "monotone") {
    res = cmvc::verify_monotone_streams(v.streams, v.max_outer, v.lambda, v.seed);
  } else {
    throw cmvc::ConfigError("verify: unknown kind '" + v.kind + "'");
  }
  std::printf("%s  %s\n", res.pass ? "PASS" : "FAIL", res.detail.c_str());
  return res.pass ? 0 : kExitVerifyFailed;
}

}  // namespace

const char* kConfigHelp = R"(config JSON schema (schema_version 1), defaults in parentheses:
  k            cluster count, required          lambda       contrastive weight (0.5)
  lambda_grid  array, or true for 2^-10..2^0    w_p / w_n    pair weights (1.0 / 0.2, ratio 5)
  m_p / m_n    partners per sample (5 / 5)      budget       {policy: sqrt_n|fixed|full, r} (sqrt_n)
  eps0         outer stop (1e-4)                max_outer_iters (200)
  inner_tol    partition solve stop (1e-8)      inner_max_iters (100)
  seed         (1)                              strategy     FSF|IMVC|G|S|K|RS (FSF)
  batch_size   0 = exact loss (0)               kmeans_repeats  metric repeats, 0 = off (50)
  compute_each score views alone (false)        kernel       "linear"
  data         {synthetic: {n,k,views,dims,separation,noise_level,corrupted_views,seed}}
               or {views: [csv...], labels: csv, has_header: false}
environment: CMVC_LOG = error|warn|info|debug)";

int main(int argc, char** argv) {
  CLI::App app{"continual multi-view clustering with filtered structural fusion"};
  app.require_subcommand(1);
  app.footer(kConfigHelp);

  CommonArgs run_args, ablate_args, cfp_args, synth_args;
  VerifyArgs verify_args;

  CLI::App* run = app.add_subcommand("run", "run the continual pipeline");
  add_common(run, run_args, false);

  CLI::App* ablate = app.add_subcommand("ablate", "run one pair-selection ablation");
  add_common(ablate, ablate_args, false);

  CLI::App* cfp = app.add_subcommand("cfp", "prefix trace with per-view 'Each' baseline");
  add_common(cfp, cfp_args, false);

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic stream as CSV files");
  add_common(synth, synth_args, true);

  CLI::App* verify = app.add_subcommand("verify", "run a bound/oracle verifier");
  verify->add_option("kind", verify_args.kind,
                     "mean_bound | std_bound | cs_bound | procrustes | monotone")
      ->required();
  verify->add_option("--n", verify_args.n, "population size");
  verify->add_option("--r", verify_args.r, "subsample size");
  verify->add_option("--delta", verify_args.delta, "confidence parameter");
  verify->add_option("--trials", verify_args.trials, "Monte-Carlo trials");
  verify->add_option("--instances", verify_args.instances, "random instances");
  verify->add_option("--k", verify_args.k, "max column count");
  verify->add_option("--q-samples", verify_args.q_samples, "random rotations per instance");
  verify->add_option("--streams", verify_args.streams, "synthetic streams");
  verify->add_option("--max-outer", verify_args.max_outer, "outer iteration budget");
  verify->add_option("--lambda", verify_args.lambda, "contrastive weight");
  verify->add_option("--tol", verify_args.tol, "tolerance");
  verify->add_option("--seed", verify_args.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(run_args, false);
    if (ablate->parsed()) {
      if (!ablate_args.strategy) throw cmvc::ConfigError("ablate: --strategy is required");
      return cmd_run(ablate_args, false);
    }
    if (cfp->parsed()) return cmd_run(cfp_args, true);
    if (synth->parsed()) return cmd_synth(synth_args);
    if (verify->parsed()) return cmd_verify(verify_args);
  } catch (const cmvc::ConfigError& e) {
    cmvc::log::error("%s", e.what());
    return kExitConfig;
  } catch (const cmvc::DataError& e) {
    cmvc::log::error("%s", e.what());
    return kExitData;
  } catch (const cmvc::InvariantError& e) {
    cmvc::log::error("invariant violation: %s", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    cmvc::log::error("unexpected error: %s", e.what());
    return kExitData;
  }
  return 0;
}
