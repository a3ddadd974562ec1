#pragma once

#include "qsanfis/cluster_pipeline.hpp"
#include "qsanfis/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsanfis {

enum class RuleOrder { Zero, First };

RuleOrder parse_rule_order(const std::string& text);
const char* to_string(RuleOrder order);

/// Gaussian exp(-(x - mean)^2 / (2 width^2)).
struct MembershipFn {
  double mean = 0.0;
  double width = 1.0;

  double log_degree(double x) const {
    const double u = (x - mean) / width;
    return -0.5 * u * u;
  }
};

/// Consequent holds a_0..a_n (first order) or just a_0 (zero order).
struct FuzzyRule {
  std::vector<MembershipFn> premise;
  Eigen::VectorXd consequent;

  double output(const Eigen::VectorXd& p) const;
};

/// Below this total firing strength the normalization falls back to uniform.
inline constexpr double kFiringFloor = 1e-12;

class AnfisModel {
 public:
  AnfisModel() = default;
  AnfisModel(std::vector<FuzzyRule> rules, std::size_t input_dim, RuleOrder order);

  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
  std::vector<FuzzyRule>& rules() noexcept { return rules_; }
  std::size_t rule_count() const noexcept { return rules_.size(); }
  std::size_t input_dim() const noexcept { return input_dim_; }
  RuleOrder order() const noexcept { return order_; }
  std::size_t consequent_size() const noexcept { return order_ == RuleOrder::First ? input_dim_ + 1 : 1; }

  /// Optional column names carried through serialization for schema checks.
  std::vector<std::string> input_names;
  std::string target_name;

  /// Throws std::invalid_argument if any structural invariant is broken.
  void validate() const;

 private:
  std::vector<FuzzyRule> rules_;
  std::size_t input_dim_ = 0;
  RuleOrder order_ = RuleOrder::First;
};

struct ForwardTrace {
  Eigen::MatrixXd memberships;  ///< r x n
  Eigen::VectorXd w;
  Eigen::VectorXd w_bar;
  Eigen::VectorXd rule_outputs;
  double y_hat = 0.0;
  bool fallback = false;  ///< sum of w fell below kFiringFloor
};

/// One rule per cluster: means from the centres, widths from the spreads,
/// consequents zero.
AnfisModel build_from_clusters(const ClusterModel& clusters, RuleOrder order);

ForwardTrace forward(const AnfisModel& model, const Eigen::VectorXd& p);
Eigen::VectorXd predict_batch(const AnfisModel& model, const Eigen::MatrixXd& inputs);
Eigen::VectorXd predict_batch(const AnfisModel& model, const Dataset& data);

/// d y_hat / d p.
Eigen::VectorXd input_gradient(const AnfisModel& model, const Eigen::VectorXd& p);

void save_model(std::ostream& out, const AnfisModel& model);
AnfisModel load_model(std::istream& in);

}  // namespace qsanfis
