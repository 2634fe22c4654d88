#include "cmvc/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cmvc/error.hpp"

namespace cmvc {

using nlohmann::json;

void RunConfig::validate() const {
  if (k < 2) throw ConfigError("config: k must be >= 2");
  if (lambda < 0) throw ConfigError("config: lambda must be >= 0");
  for (double l : lambda_grid)
    if (l < 0) throw ConfigError("config: lambda_grid values must be >= 0");
  if (!(w_p > 0) || !(w_n > 0)) throw ConfigError("config: w_p and w_n must be positive");
  if (m_p < 0 || m_n < 0) throw ConfigError("config: m_p and m_n must be >= 0");
  if (!(eps0 > 0)) throw ConfigError("config: eps0 must be > 0");
  if (max_outer_iters < 1) throw ConfigError("config: max_outer_iters must be >= 1");
  if (!(inner_tol > 0)) throw ConfigError("config: inner_tol must be > 0");
  if (inner_max_iters < 1) throw ConfigError("config: inner_max_iters must be >= 1");
  if (batch_size < 0) throw ConfigError("config: batch_size must be >= 0");
  if (kmeans_repeats < 0) throw ConfigError("config: kmeans_repeats must be >= 0");
  if (kernel != "linear")
    throw ConfigError("config: unsupported kernel '" + kernel + "' (only 'linear')");
  if (budget.policy == SampleBudget::Policy::kFixed && budget.r < 1)
    throw ConfigError("config: fixed budget requires r >= 1");
  if (synthetic && !view_paths.empty())
    throw ConfigError("config: give either a synthetic block or view paths, not both");
  if (synthetic) synthetic->validate();
}

std::vector<double> RunConfig::default_lambda_grid() {
  std::vector<double> grid;
  for (int e = -10; e <= 0; ++e) grid.push_back(std::pow(2.0, e));
  return grid;
}

namespace {

SampleBudget budget_from_json(const json& j) {
  SampleBudget b;
  std::string policy = j.value("policy", "sqrt_n");
  if (policy == "sqrt_n") {
    b = SampleBudget::sqrt_n();
  } else if (policy == "full") {
    b = SampleBudget::full();
  } else if (policy == "fixed") {
    b = SampleBudget::fixed(j.value("r", 0));
  } else {
    throw ConfigError("config: unknown budget policy '" + policy + "'");
  }
  return b;
}

json budget_to_json(const SampleBudget& b) {
  json j;
  switch (b.policy) {
    case SampleBudget::Policy::kSqrtN: j["policy"] = "sqrt_n"; break;
    case SampleBudget::Policy::kFull: j["policy"] = "full"; break;
    case SampleBudget::Policy::kFixed:
      j["policy"] = "fixed";
      j["r"] = b.r;
      break;
  }
  return j;
}

SyntheticSpec synthetic_from_json(const json& j) {
  SyntheticSpec s;
  s.n = j.value("n", s.n);
  s.k = j.value("k", s.k);
  s.views = j.value("views", s.views);
  if (j.contains("dims")) {
    if (j["dims"].is_array())
      s.dims = j["dims"].get<std::vector<int>>();
    else
      s.dims.assign(s.views, j["dims"].get<int>());
  } else {
    s.dims.assign(s.views, 16);
  }
  s.separation = j.value("separation", s.separation);
  if (j.contains("noise_level")) {
    if (j["noise_level"].is_array())
      s.noise_level = j["noise_level"].get<std::vector<double>>();
    else
      s.noise_level.assign(s.views, j["noise_level"].get<double>());
  } else {
    s.noise_level.assign(s.views, 0.0);
  }
  if (j.contains("corrupted_views"))
    for (int t : j["corrupted_views"].get<std::vector<int>>()) s.corrupted_views.insert(t);
  s.seed = j.value("seed", static_cast<std::uint64_t>(1));
  return s;
}

json synthetic_to_json(const SyntheticSpec& s) {
  json j;
  j["n"] = s.n;
  j["k"] = s.k;
  j["views"] = s.views;
  j["dims"] = s.dims;
  j["separation"] = s.separation;
  j["noise_level"] = s.noise_level;
  j["corrupted_views"] = std::vector<int>(s.corrupted_views.begin(), s.corrupted_views.end());
  j["seed"] = s.seed;
  return j;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  int schema = j.value("schema_version", RunConfig::kSchemaVersion);
  if (schema != RunConfig::kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(schema));

  RunConfig cfg;
  try {
    cfg.k = j.value("k", 0);
    cfg.lambda = j.value("lambda", cfg.lambda);
    if (j.contains("lambda_grid")) {
      if (j["lambda_grid"].is_boolean()) {
        if (j["lambda_grid"].get<bool>()) cfg.lambda_grid = RunConfig::default_lambda_grid();
      } else {
        cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
      }
    }
    cfg.w_p = j.value("w_p", cfg.w_p);
    cfg.w_n = j.value("w_n", cfg.w_n);
    cfg.m_p = j.value("m_p", cfg.m_p);
    cfg.m_n = j.value("m_n", cfg.m_n);
    if (j.contains("budget")) cfg.budget = budget_from_json(j["budget"]);
    cfg.eps0 = j.value("eps0", cfg.eps0);
    cfg.max_outer_iters = j.value("max_outer_iters", cfg.max_outer_iters);
    cfg.inner_tol = j.value("inner_tol", cfg.inner_tol);
    cfg.inner_max_iters = j.value("inner_max_iters", cfg.inner_max_iters);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.strategy = parse_strategy(j.value("strategy", "FSF"));
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.kmeans_repeats = j.value("kmeans_repeats", cfg.kmeans_repeats);
    cfg.compute_each = j.value("compute_each", cfg.compute_each);
    cfg.kernel = j.value("kernel", cfg.kernel);
    if (j.contains("data")) {
      const json& data = j["data"];
      if (data.contains("synthetic")) cfg.synthetic = synthetic_from_json(data["synthetic"]);
      if (data.contains("views")) cfg.view_paths = data["views"].get<std::vector<std::string>>();
      if (data.contains("labels")) cfg.labels_path = data["labels"].get<std::string>();
      cfg.views_have_header = data.value("has_header", false);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = RunConfig::kSchemaVersion;
  j["k"] = cfg.k;
  j["lambda"] = cfg.lambda;
  j["lambda_grid"] = cfg.lambda_grid;
  j["w_p"] = cfg.w_p;
  j["w_n"] = cfg.w_n;
  j["m_p"] = cfg.m_p;
  j["m_n"] = cfg.m_n;
  j["budget"] = budget_to_json(cfg.budget);
  j["eps0"] = cfg.eps0;
  j["max_outer_iters"] = cfg.max_outer_iters;
  j["inner_tol"] = cfg.inner_tol;
  j["inner_max_iters"] = cfg.inner_max_iters;
  j["seed"] = cfg.seed;
  j["strategy"] = strategy_name(cfg.strategy);
  j["batch_size"] = cfg.batch_size;
  j["kmeans_repeats"] = cfg.kmeans_repeats;
  j["compute_each"] = cfg.compute_each;
  j["kernel"] = cfg.kernel;
  json data;
  if (cfg.synthetic) data["synthetic"] = synthetic_to_json(*cfg.synthetic);
  if (!cfg.view_paths.empty()) data["views"] = cfg.view_paths;
  if (!cfg.labels_path.empty()) data["labels"] = cfg.labels_path;
  if (!cfg.view_paths.empty()) data["has_header"] = cfg.views_have_header;
  j["data"] = data;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace cmvc
