#pragma once

#include "qsanfis/anfis.hpp"
#include "qsanfis/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace qsanfis {

/// Widths are clamped to at least this after every premise update.
inline constexpr double kMinWidth = 0.01;

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.01;
  double ridge = 1e-9;
  RuleOrder order = RuleOrder::First;

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_rmse;
  std::vector<double> test_rmse;
  std::vector<std::pair<double, double>> final_predictions_test;  ///< (actual, predicted)
  std::size_t rule_count = 0;
  double avg_test_rmse = 0.0;

  double final_test_rmse() const { return test_rmse.empty() ? 0.0 : test_rmse.back(); }
};

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);
double sum_squared_error(const AnfisModel& model, const Dataset& data);

/// Rows w_bar_i [1, p_1..p_n] per rule, stacked rule-major (zero order: w_bar_i).
Eigen::MatrixXd consequent_design(const AnfisModel& model, const Eigen::MatrixXd& inputs);

/// Solves min |X theta - y|^2 + ridge |theta|^2 with premises held fixed and
/// writes theta into the rules. With ridge == 0 a rank-deficient design is
/// an error.
AnfisModel lse_consequents(AnfisModel model, const Dataset& train, double ridge);

struct PremiseGradient {
  Eigen::MatrixXd d_mean;   ///< r x n, dE/dmu
  Eigen::MatrixXd d_width;  ///< r x n, dE/dsigma
};

/// Gradient of E = sum (y_hat - y)^2 over the premise parameters.
PremiseGradient premise_gradient(const AnfisModel& model, const Dataset& data);

/// One full-batch descent step on (mu, sigma); widths clamped at kMinWidth.
AnfisModel bp_premise_step(AnfisModel model, const Dataset& train, double lr);

/// Per epoch: LSE for consequents, one BP premise step, then RMSE on both
/// splits. avg_test_rmse is the mean of the per-epoch test RMSE.
std::pair<AnfisModel, TrainReport> train_hybrid(AnfisModel model, const Dataset& train, const Dataset& test,
                                                const TrainConfig& cfg);

/// epoch,train_rmse,test_rmse (epochs counted from 1)
void write_epoch_csv(std::ostream& out, const TrainReport& report);
/// index,actual,predicted
void write_prediction_csv(std::ostream& out, const TrainReport& report);

}  // namespace qsanfis
