#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qsanfis {

/// Radii are in normalized-data units. The revision radius defaults to
/// 1.5 r_a; pass one explicitly to override.
struct SubtractiveConfig {
  explicit SubtractiveConfig(double r_a = 0.5, std::optional<double> r_b = std::nullopt);

  double r_a;
  double r_b;
  double accept_ratio = 0.5;
  double reject_ratio = 0.15;
  std::size_t max_centers = 100;

  void validate() const;
};

struct DensityState {
  Eigen::VectorXd density;
  std::vector<std::size_t> selected;
};

/// D_k = sum_k' exp(-|z_k - z_k'|^2 / (r_a/2)^2), self term included.
Eigen::VectorXd density(const Eigen::MatrixXd& points, double r_a);

/// Revises every density around the most recently selected centre v:
/// D_k -= D_v exp(-|z_k - z_v|^2 / (r_b/2)^2).
DensityState subtract(DensityState state, const Eigen::MatrixXd& points, double r_b);

enum class Verdict { Accepted, AcceptedGray, RejectedGray, Stopped, LimitReached };

struct SelectionStep {
  std::size_t candidate = 0;
  double density = 0.0;  ///< candidate's current density when examined
  double ratio = 0.0;    ///< density / first centre's density
  Verdict verdict = Verdict::Accepted;
};

struct SubtractiveResult {
  std::size_t k = 0;
  std::vector<std::size_t> indices;
  Eigen::MatrixXd centers;
  std::vector<double> center_densities;  ///< density of each centre at selection
  std::vector<SelectionStep> trace;
};

/// Chiu's selection loop with the two-threshold stopping rule. Candidates
/// between the reject and accept ratios are kept only when
/// d_min / r_a + D / D_first >= 1, otherwise their density is zeroed and the
/// search continues. Ties in the argmax go to the lowest index.
SubtractiveResult select_center_count(const Eigen::MatrixXd& points, const SubtractiveConfig& cfg);

/// One line per examined candidate: step,index,density,ratio,verdict
void write_trace(std::ostream& out, const SubtractiveResult& result);

const char* to_string(Verdict verdict);

}  // namespace qsanfis
