#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cmvc/config.hpp"
#include "cmvc/csv.hpp"
#include "cmvc/fusion.hpp"
#include "cmvc/metrics.hpp"

namespace cmvc {

struct PrefixMetrics {
  int view = 0;                    // prefix length t
  MetricSet fused;                 // metrics of the consensus after fusing t views
  std::optional<MetricSet> each;   // the view scored alone, when requested
};

struct BufferStats {
  std::size_t pair_count = 0;
  std::size_t conflicts_resolved = 0;  // tombstones
  int views_merged = 0;
  double frobenius = 0.0;
  std::string selection_hash;  // hex digest over all per-view selections
};

struct PhaseTiming {
  double ingest_s = 0.0;
  double pairs_s = 0.0;
  double fusion_s = 0.0;
  double metrics_s = 0.0;
  double total_s = 0.0;
};

struct Report {
  int schema_version = RunConfig::kSchemaVersion;
  std::uint64_t seed = 0;
  double lambda = 0.0;  // effective lambda of the run
  std::string strategy;
  int views = 0;
  bool metrics_available = false;
  std::vector<PrefixMetrics> prefix;
  std::vector<FuseTrace> traces;  // one per view, aligned with prefix
  BufferStats buffer;
  PhaseTiming timing;
};

struct ContinualResult {
  FusionState state;
  Report report;
};

// Averaged external metrics of `repeats` independent seeded k-means runs on
// the rows of h.
MetricSet evaluate_partition(const Matrix& h, const std::vector<int>& labels, int k, int repeats,
                             std::uint64_t seed);

// Full continual loop: per view extract the partition, select and merge
// pairs, fuse, then score the consensus prefix.
ContinualResult run_continual(const std::vector<ViewMatrix>& views,
                              const std::optional<std::vector<int>>& labels,
                              const RunConfig& cfg);

// Materializes the config's data source (synthetic block or CSV paths).
struct LoadedStream {
  std::vector<ViewMatrix> views;
  std::optional<std::vector<int>> labels;
};
LoadedStream load_stream(const RunConfig& cfg);

// One lambda-grid cell: the effective lambda and the final consensus metrics.
struct GridCell {
  double lambda = 0.0;
  MetricSet final_metrics;
};

// Runs the config's lambda grid (concurrently up to `jobs`), identical seeds
// per cell; returns cells in grid order.
std::vector<GridCell> run_lambda_grid(const std::vector<ViewMatrix>& views,
                                      const std::vector<int>& labels, const RunConfig& cfg,
                                      int jobs);

nlohmann::json report_to_json(const Report& report, const RunConfig& cfg);
void write_report_json(const std::string& path, const Report& report, const RunConfig& cfg);
void write_objective_trace_csv(const std::string& path, const Report& report);
void write_cfp_trace_csv(const std::string& path, const Report& report);
void write_lambda_grid_csv(const std::string& path, const std::vector<GridCell>& cells);

}  // namespace cmvc
