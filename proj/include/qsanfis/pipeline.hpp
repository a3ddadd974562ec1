#pragma once

#include "qsanfis/anfis.hpp"
#include "qsanfis/cluster_pipeline.hpp"
#include "qsanfis/dataset.hpp"
#include "qsanfis/quantum_potential.hpp"
#include "qsanfis/subtractive.hpp"
#include "qsanfis/trainer.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qsanfis {

enum class Clustering {
  QuantumSubtractive,  ///< potential-sort centres, k from subtractive clustering
  GradientDescentQc,   ///< baseline: gradient-descent end points, same k
};

/// Everything a run needs. Keys accepted by set() and written by
/// format_config() are the command-line flag names without dashes.
struct PipelineConfig {
  std::filesystem::path data;
  std::string target;
  std::vector<std::string> inputs;  ///< empty: every non-target column
  std::string missing_token = "?";
  double sigma = 0.25;
  double r_a = 0.5;
  std::optional<double> r_b;  ///< default 1.5 r_a
  double min_separation = 0.0;
  RuleOrder order = RuleOrder::First;
  int epochs = 10;
  double learning_rate = 0.01;
  double ridge = 1e-9;
  bool swap_split = false;
  Clustering clustering = Clustering::QuantumSubtractive;
  int gd_steps = 200;
  std::optional<double> gd_eta;  ///< default 0.01 sigma^2
  std::filesystem::path out = "out";

  /// Applies one key/value pair; throws std::invalid_argument on an unknown
  /// key or unparsable value.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  SubtractiveConfig subtractive() const;
  TrainConfig training() const;
  GradientDescentConfig gradient_descent() const;
};

/// Every settable key, in the order format_config writes them.
const std::vector<std::string>& config_keys();

/// Reads `key = value` lines ('#' comments allowed) over `base`.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
std::string format_config(const PipelineConfig& cfg);

struct PreparedData {
  Dataset normalized;
  NormParams norm;
  Split split;
};

/// load -> drop missing -> normalize (full data) -> parity split.
PreparedData prepare_data(const PipelineConfig& cfg);

struct ClusterRun {
  ClusterModel clusters;
  SubtractiveResult count;
  PotentialField field;
};

ClusterRun run_clustering(const PipelineConfig& cfg, const Dataset& train);

struct ClusterSummary {
  std::size_t k = 0;
  std::vector<std::string> warnings;
};

/// Writes clusters.txt, potential.csv, subtractive_trace.csv and
/// effective_config.cfg into cfg.out.
ClusterSummary cmd_cluster(const PipelineConfig& cfg);

struct TrainSummary {
  std::size_t rule_count = 0;
  double avg_test_rmse = 0.0;
  double final_test_rmse = 0.0;
  double final_train_rmse = 0.0;
  std::vector<std::string> warnings;

  std::string line() const;
};

/// Full pipeline. Writes model.txt, epochs.csv, predictions.csv,
/// summary.txt, clusters.txt, norm_params.csv, train.csv, test.csv and
/// effective_config.cfg into cfg.out.
TrainSummary cmd_train(const PipelineConfig& cfg);

/// Writes index,prediction rows. With norm_params the input CSV is taken
/// to be in raw units and predictions are mapped back to raw target units.
/// Returns the number of predictions.
std::size_t cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& csv_path,
                        const std::filesystem::path& out_path,
                        const std::optional<std::filesystem::path>& norm_params = std::nullopt,
                        const std::string& missing_token = "?");

struct SigmaSweepRow {
  double sigma = 0.0;
  std::size_t k = 0;
  double avg_test_rmse = 0.0;
  double final_test_rmse = 0.0;
};

/// cmd_train per sigma into cfg.out/sigma_<value>/, table in sweep_sigma.csv.
std::vector<SigmaSweepRow> cmd_sweep_sigma(const PipelineConfig& cfg, const std::vector<double>& sigmas);

struct RadiusSweepRow {
  double r_a = 0.0;
  std::size_t k = 0;
};

/// Subtractive cluster count on the training split per r_a, table in
/// sweep_ra.csv.
std::vector<RadiusSweepRow> cmd_sweep_ra(const PipelineConfig& cfg, const std::vector<double>& radii);

}  // namespace qsanfis
