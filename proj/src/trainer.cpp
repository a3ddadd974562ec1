#include "qsanfis/trainer.hpp"

#include "qsanfis/text_io.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsanfis {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be non-negative");
}

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("rmse: length mismatch (" + std::to_string(predicted.size()) + " vs " +
                                std::to_string(actual.size()) + ")");
  if (predicted.size() == 0) throw std::invalid_argument("rmse: empty input");
  return std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(predicted.size()));
}

double sum_squared_error(const AnfisModel& model, const Dataset& data) {
  return (predict_batch(model, data) - data.targets()).squaredNorm();
}

Eigen::MatrixXd consequent_design(const AnfisModel& model, const Eigen::MatrixXd& inputs) {
  const auto r = static_cast<Eigen::Index>(model.rule_count());
  const auto m = static_cast<Eigen::Index>(model.consequent_size());
  Eigen::MatrixXd x(inputs.rows(), r * m);
  for (Eigen::Index s = 0; s < inputs.rows(); ++s) {
    const Eigen::VectorXd p = inputs.row(s).transpose();
    const auto t = forward(model, p);
    for (Eigen::Index i = 0; i < r; ++i) {
      x(s, i * m) = t.w_bar(i);
      for (Eigen::Index j = 1; j < m; ++j) x(s, i * m + j) = t.w_bar(i) * p(j - 1);
    }
  }
  return x;
}

AnfisModel lse_consequents(AnfisModel model, const Dataset& train, double ridge) {
  if (train.empty()) throw std::invalid_argument("lse_consequents: empty training set");
  if (train.input_dim() != model.input_dim()) throw std::invalid_argument("lse_consequents: dimension mismatch");
  if (!(ridge >= 0.0)) throw std::invalid_argument("lse_consequents: ridge must be non-negative");

  const Eigen::MatrixXd x = consequent_design(model, train.inputs());
  const auto cols = x.cols();
  Eigen::MatrixXd a(x.rows() + (ridge > 0.0 ? cols : 0), cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
  a.topRows(x.rows()) = x;
  b.head(x.rows()) = train.targets();
  if (ridge > 0.0) a.bottomRows(cols) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(cols, cols);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (ridge == 0.0 && qr.rank() < cols)
    throw std::runtime_error("least-squares design is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                             std::to_string(cols) + "); use a positive ridge");
  const Eigen::VectorXd theta = qr.solve(b);

  const auto m = static_cast<Eigen::Index>(model.consequent_size());
  for (std::size_t i = 0; i < model.rule_count(); ++i)
    model.rules()[i].consequent = theta.segment(static_cast<Eigen::Index>(i) * m, m);
  return model;
}

PremiseGradient premise_gradient(const AnfisModel& model, const Dataset& data) {
  if (data.input_dim() != model.input_dim()) throw std::invalid_argument("premise_gradient: dimension mismatch");
  const auto r = static_cast<Eigen::Index>(model.rule_count());
  const auto n = static_cast<Eigen::Index>(model.input_dim());
  PremiseGradient g{Eigen::MatrixXd::Zero(r, n), Eigen::MatrixXd::Zero(r, n)};
  for (Eigen::Index s = 0; s < data.inputs().rows(); ++s) {
    const Eigen::VectorXd p = data.inputs().row(s).transpose();
    const auto t = forward(model, p);
    if (t.fallback) continue;  // uniform weights do not depend on the premises
    const double err = t.y_hat - data.targets()(s);
    for (Eigen::Index i = 0; i < r; ++i) {
      // dE/dlog(w_i) = 2 err w_bar_i (y_i - y_hat)
      const double dlogw = 2.0 * err * t.w_bar(i) * (t.rule_outputs(i) - t.y_hat);
      const auto& rule = model.rules()[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& mf = rule.premise[static_cast<std::size_t>(j)];
        const double diff = p(j) - mf.mean;
        const double s2 = mf.width * mf.width;
        g.d_mean(i, j) += dlogw * diff / s2;
        g.d_width(i, j) += dlogw * diff * diff / (s2 * mf.width);
      }
    }
  }
  return g;
}

AnfisModel bp_premise_step(AnfisModel model, const Dataset& train, double lr) {
  if (train.empty()) throw std::invalid_argument("bp_premise_step: empty training set");
  if (!(lr > 0.0)) throw std::invalid_argument("bp_premise_step: learning rate must be positive");
  const auto g = premise_gradient(model, train);
  for (std::size_t i = 0; i < model.rule_count(); ++i) {
    auto& rule = model.rules()[i];
    for (std::size_t j = 0; j < model.input_dim(); ++j) {
      const auto gi = static_cast<Eigen::Index>(i), gj = static_cast<Eigen::Index>(j);
      if (!std::isfinite(g.d_mean(gi, gj)) || !std::isfinite(g.d_width(gi, gj)))
        throw std::runtime_error("non-finite premise gradient at rule " + std::to_string(i) + ", input " +
                                 std::to_string(j));
      rule.premise[j].mean -= lr * g.d_mean(gi, gj);
      rule.premise[j].width = std::max(rule.premise[j].width - lr * g.d_width(gi, gj), kMinWidth);
    }
  }
  return model;
}

std::pair<AnfisModel, TrainReport> train_hybrid(AnfisModel model, const Dataset& train, const Dataset& test,
                                                const TrainConfig& cfg) {
  cfg.validate();
  if (train.empty()) throw std::invalid_argument("train_hybrid: training split is empty");
  if (test.empty()) throw std::invalid_argument("train_hybrid: test split is empty");
  if (train.input_dim() != model.input_dim() || test.input_dim() != model.input_dim())
    throw std::invalid_argument("train_hybrid: dataset dimension differs from model");

  TrainReport report;
  report.rule_count = model.rule_count();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    model = lse_consequents(std::move(model), train, cfg.ridge);
    model = bp_premise_step(std::move(model), train, cfg.learning_rate);
    report.train_rmse.push_back(rmse(predict_batch(model, train), train.targets()));
    report.test_rmse.push_back(rmse(predict_batch(model, test), test.targets()));
  }
  const Eigen::VectorXd predicted = predict_batch(model, test);
  for (Eigen::Index s = 0; s < predicted.size(); ++s) report.final_predictions_test.emplace_back(test.targets()(s), predicted(s));
  report.avg_test_rmse = std::accumulate(report.test_rmse.begin(), report.test_rmse.end(), 0.0) /
                         static_cast<double>(report.test_rmse.size());
  return {std::move(model), std::move(report)};
}

void write_epoch_csv(std::ostream& out, const TrainReport& report) {
  out << "epoch,train_rmse,test_rmse\n";
  for (std::size_t e = 0; e < report.train_rmse.size(); ++e)
    out << e + 1 << ',' << format_double(report.train_rmse[e]) << ',' << format_double(report.test_rmse[e]) << '\n';
}

void write_prediction_csv(std::ostream& out, const TrainReport& report) {
  out << "index,actual,predicted\n";
  for (std::size_t s = 0; s < report.final_predictions_test.size(); ++s)
    out << s << ',' << format_double(report.final_predictions_test[s].first) << ','
        << format_double(report.final_predictions_test[s].second) << '\n';
}

}  // namespace qsanfis
