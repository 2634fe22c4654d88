#include "cmvc/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <string>

#include <nlohmann/json.hpp>

#include "cmvc/error.hpp"
#include "cmvc/kmeans.hpp"
#include "cmvc/log.hpp"
#include "cmvc/partition.hpp"

namespace cmvc {

using nlohmann::json;

namespace {

constexpr std::uint64_t kPairStream = 0x50414952ULL;  // per-view pair selection

class Stopwatch {
 public:
  Stopwatch() : begin_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin_).count();
  }

 private:
  std::chrono::steady_clock::time_point begin_;
};

void check_metric_range(const MetricSet& m) {
  for (double v : {m.acc, m.nmi, m.purity})
    if (!(v >= 0.0 && v <= 1.0)) throw InvariantError("report: metric outside [0,1]");
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

MetricSet evaluate_partition(const Matrix& h, const std::vector<int>& labels, int k, int repeats,
                             std::uint64_t seed) {
  if (repeats < 1) throw ConfigError("evaluate_partition: repeats must be >= 1");
  MetricSet avg;
  for (int rep = 0; rep < repeats; ++rep) {
    ClusterAssignment a = kmeans(h, k, /*restarts=*/1, derive_seed(seed, rep));
    MetricSet m = evaluate_labels(a.labels, labels);
    avg.acc += m.acc;
    avg.nmi += m.nmi;
    avg.purity += m.purity;
  }
  avg.acc /= repeats;
  avg.nmi /= repeats;
  avg.purity /= repeats;
  return avg;
}

ContinualResult run_continual(const std::vector<ViewMatrix>& views,
                              const std::optional<std::vector<int>>& labels,
                              const RunConfig& cfg) {
  cfg.validate();
  if (views.empty()) throw DataError("run_continual: need at least one view");
  const int n = views.front().samples();
  for (const auto& v : views)
    if (v.samples() != n) throw DataError("run_continual: views disagree on sample count");
  if (labels && static_cast<int>(labels->size()) != n)
    throw DataError("run_continual: labels length does not match sample count");
  const bool want_metrics = cfg.kmeans_repeats > 0;
  if (want_metrics && !labels)
    throw DataError("run_continual: metrics requested but no labels available");

  const double lambda = cfg.effective_lambda();
  FuseOptions fuse_opts;
  fuse_opts.lambda = lambda;
  fuse_opts.eps0 = cfg.eps0;
  fuse_opts.max_outer_iters = cfg.max_outer_iters;
  fuse_opts.batch_size = cfg.batch_size;
  fuse_opts.inner.tol = cfg.inner_tol;
  fuse_opts.inner.max_iters = cfg.inner_max_iters;

  ContinualResult out;
  out.state.buffer = StructuralBuffer(n, cfg.w_p, cfg.w_n);
  Report& report = out.report;
  report.seed = cfg.seed;
  report.lambda = lambda;
  report.strategy = strategy_name(cfg.strategy);
  report.metrics_available = want_metrics;

  Stopwatch total;
  std::uint64_t combined_hash = 0;
  for (std::size_t idx = 0; idx < views.size(); ++idx) {
    const int t = static_cast<int>(idx) + 1;

    Stopwatch sw_ingest;
    Matrix h_t = extract_partition(views[idx].data, cfg.k);
    report.timing.ingest_s += sw_ingest.seconds();

    Stopwatch sw_pairs;
    const std::uint64_t pair_seed = derive_seed(cfg.seed, kPairStream, t);
    PairSelection sel =
        select_pairs(cfg.strategy, h_t, cfg.k, cfg.budget, cfg.m_p, cfg.m_n, pair_seed);
    sel.check_invariants();
    combined_hash = mix64(combined_hash ^ selection_hash(sel));
    StructuralBuffer incoming = build_indicator(sel, cfg.w_p, cfg.w_n, n);
    out.state.buffer = merge_buffer(out.state.buffer, incoming);
    out.state.buffer.check_invariants();
    report.timing.pairs_s += sw_pairs.seconds();

    Stopwatch sw_fuse;
    FuseTrace trace = fuse_view(out.state, h_t, fuse_opts);
    report.timing.fusion_s += sw_fuse.seconds();
    log::info("view %d fused: %d iterations, objective %.6f", t, trace.iterations,
              trace.objective.back());

    PrefixMetrics pm;
    pm.view = t;
    if (want_metrics) {
      Stopwatch sw_metrics;
      pm.fused = evaluate_partition(out.state.consensus, *labels, cfg.k, cfg.kmeans_repeats,
                                    derive_seed(cfg.seed, stream::kEvalKmeans, t));
      check_metric_range(pm.fused);
      if (cfg.compute_each) {
        pm.each = evaluate_partition(h_t, *labels, cfg.k, cfg.kmeans_repeats,
                                     derive_seed(cfg.seed, stream::kEachKmeans, t));
        check_metric_range(*pm.each);
      }
      report.timing.metrics_s += sw_metrics.seconds();
    }
    report.prefix.push_back(pm);
    report.traces.push_back(std::move(trace));
    report.views = t;
  }

  report.buffer.pair_count = out.state.buffer.pair_count();
  report.buffer.conflicts_resolved = out.state.buffer.tombstone_count();
  report.buffer.views_merged = out.state.buffer.views_merged();
  report.buffer.frobenius = out.state.buffer.frobenius_norm();
  report.buffer.selection_hash = hash_hex(combined_hash);
  report.timing.total_s = total.seconds();

  if (report.prefix.size() != static_cast<std::size_t>(out.state.views_fused))
    throw InvariantError("report: prefix list length != views fused");
  return out;
}

LoadedStream load_stream(const RunConfig& cfg) {
  LoadedStream out;
  if (cfg.synthetic) {
    SyntheticStream s = generate_synthetic_stream(*cfg.synthetic);
    out.views = std::move(s.views);
    out.labels = std::move(s.labels);
    return out;
  }
  if (cfg.view_paths.empty())
    throw ConfigError("config: no data source (need a synthetic block or view paths)");
  int t = 1;
  for (const auto& path : cfg.view_paths)
    out.views.push_back(load_view_csv(path, cfg.views_have_header, t++));
  if (!cfg.labels_path.empty()) out.labels = load_labels(cfg.labels_path);
  return out;
}

std::vector<GridCell> run_lambda_grid(const std::vector<ViewMatrix>& views,
                                      const std::vector<int>& labels, const RunConfig& cfg,
                                      int jobs) {
  std::vector<double> grid = cfg.lambda_grid;
  if (grid.empty()) grid.push_back(cfg.lambda);
  if (jobs < 1) jobs = 1;

  std::vector<GridCell> cells(grid.size());
  std::optional<std::vector<int>> opt_labels = labels;
  for (std::size_t base = 0; base < grid.size(); base += jobs) {
    const std::size_t end = std::min(grid.size(), base + jobs);
    std::vector<std::future<GridCell>> batch;
    for (std::size_t i = base; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        RunConfig cell_cfg = cfg;
        cell_cfg.lambda = grid[i];
        cell_cfg.lambda_grid.clear();
        ContinualResult res = run_continual(views, opt_labels, cell_cfg);
        return GridCell{cell_cfg.effective_lambda(), res.report.prefix.back().fused};
      }));
    }
    for (std::size_t i = base; i < end; ++i) cells[i] = batch[i - base].get();
  }
  return cells;
}

namespace {

json metrics_to_json(const MetricSet& m) {
  return json{{"acc", m.acc}, {"nmi", m.nmi}, {"purity", m.purity}};
}

}  // namespace

json report_to_json(const Report& report, const RunConfig& cfg) {
  json j;
  j["schema_version"] = report.schema_version;
  j["seed"] = report.seed;
  j["lambda"] = report.lambda;
  j["strategy"] = report.strategy;
  j["views"] = report.views;
  j["metrics_available"] = report.metrics_available;
  j["config"] = config_to_json(cfg);

  json prefix = json::array();
  for (const auto& pm : report.prefix) {
    json row;
    row["view"] = pm.view;
    if (report.metrics_available) row["fused"] = metrics_to_json(pm.fused);
    if (pm.each) row["each"] = metrics_to_json(*pm.each);
    prefix.push_back(row);
  }
  j["prefix_metrics"] = prefix;

  json traces = json::array();
  for (std::size_t t = 0; t < report.traces.size(); ++t) {
    const FuseTrace& tr = report.traces[t];
    traces.push_back(json{{"view", t + 1},
                          {"iterations", tr.iterations},
                          {"converged", tr.converged},
                          {"objective", tr.objective},
                          {"contrastive", tr.contrastive}});
  }
  j["objective_traces"] = traces;

  j["buffer"] = json{{"pair_count", report.buffer.pair_count},
                     {"conflicts_resolved", report.buffer.conflicts_resolved},
                     {"views_merged", report.buffer.views_merged},
                     {"frobenius", report.buffer.frobenius},
                     {"selection_hash", report.buffer.selection_hash}};
  j["timing"] = json{{"ingest_s", report.timing.ingest_s},
                     {"pairs_s", report.timing.pairs_s},
                     {"fusion_s", report.timing.fusion_s},
                     {"metrics_s", report.timing.metrics_s},
                     {"total_s", report.timing.total_s}};
  return j;
}

void write_report_json(const std::string& path, const Report& report, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report: " + path);
  out << report_to_json(report, cfg).dump(2) << '\n';
}

void write_objective_trace_csv(const std::string& path, const Report& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace: " + path);
  out << "view,iter,objective\n";
  char buf[64];
  for (std::size_t t = 0; t < report.traces.size(); ++t) {
    const auto& obj = report.traces[t].objective;
    for (std::size_t i = 0; i < obj.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", t + 1, i, obj[i]);
      out << buf;
    }
  }
}

void write_lambda_grid_csv(const std::string& path, const std::vector<GridCell>& cells) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write grid results: " + path);
  out << "lambda,acc,nmi,purity\n";
  char buf[128];
  for (const auto& cell : cells) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", cell.lambda,
                  cell.final_metrics.acc, cell.final_metrics.nmi, cell.final_metrics.purity);
    out << buf;
  }
}

void write_cfp_trace_csv(const std::string& path, const Report& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace: " + path);
  out << "view,fused_acc,fused_nmi,fused_purity,each_acc,each_nmi,each_purity\n";
  char buf[160];
  for (const auto& pm : report.prefix) {
    if (!report.metrics_available) {
      std::snprintf(buf, sizeof(buf), "%d,,,,,,\n", pm.view);
    } else if (pm.each) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", pm.view,
                    pm.fused.acc, pm.fused.nmi, pm.fused.purity, pm.each->acc, pm.each->nmi,
                    pm.each->purity);
    } else {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,,,\n", pm.view, pm.fused.acc,
                    pm.fused.nmi, pm.fused.purity);
    }
    out << buf;
  }
}

}  // namespace cmvc
