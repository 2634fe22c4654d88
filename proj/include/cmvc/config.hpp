#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cmvc/pair_selection.hpp"
#include "cmvc/synthetic.hpp"

namespace cmvc {

// All run hyperparameters plus the data source. JSON round-trippable with an
// explicit schema version.
struct RunConfig {
  static constexpr int kSchemaVersion = 1;

  int k = 0;  // cluster count, required
  double lambda = 0.5;
  std::vector<double> lambda_grid;  // non-empty enables the grid sweep
  double w_p = 1.0;
  double w_n = 0.2;  // default ratio w_p : w_n = 5
  int m_p = 5;
  int m_n = 5;
  SampleBudget budget;  // sqrt_n by default
  double eps0 = 1e-4;
  int max_outer_iters = 200;
  double inner_tol = 1e-8;
  int inner_max_iters = 100;
  std::uint64_t seed = 1;
  PairStrategy strategy = PairStrategy::kFSF;
  int batch_size = 0;       // 0 = exact contrastive loss
  int kmeans_repeats = 50;  // metric repeats; 0 disables metric evaluation
  bool compute_each = false;  // also score each view alone ("Each" baseline)
  std::string kernel = "linear";

  // data source: embedded synthetic spec, or CSV paths
  std::optional<SyntheticSpec> synthetic;
  std::vector<std::string> view_paths;
  std::string labels_path;
  bool views_have_header = false;

  void validate() const;  // throws ConfigError
  double effective_lambda() const {
    return strategy == PairStrategy::kIMVC ? 0.0 : lambda;
  }
  static std::vector<double> default_lambda_grid();  // 2^-10 .. 2^0
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

}  // namespace cmvc
