#pragma once

#include "qsanfis/quantum_potential.hpp"
#include "qsanfis/subtractive.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace qsanfis {

/// Per-dimension cluster spreads below this are raised to it.
inline constexpr double kSpreadFloor = 0.05;

struct ClusterModel {
  Eigen::MatrixXd centers;                  ///< k x d
  std::vector<std::size_t> center_indices;  ///< sample each centre came from
  std::vector<std::size_t> assignments;     ///< one centre id per sample
  double sigma = 0.0;
  double r_a = 0.0;
  Eigen::MatrixXd spread;  ///< k x d, floored standard deviations

  std::size_t k() const noexcept { return static_cast<std::size_t>(centers.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(centers.cols()); }
};

/// Nearest centre by Euclidean distance; ties go to the lower id.
std::vector<std::size_t> assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers);

/// Population standard deviation of each cluster's members per dimension,
/// floored at kSpreadFloor (an empty cluster gets the floor everywhere).
Eigen::MatrixXd cluster_spread(const Eigen::MatrixXd& points, const std::vector<std::size_t>& assignments,
                               std::size_t k);

/// Picks k by subtractive clustering, then walks samples in ascending
/// potential order and takes the first k, skipping any within
/// min_separation of a centre already taken. If the walk runs out,
/// min_separation is halved and the walk repeats.
ClusterModel quantum_subtractive_cluster(const Eigen::MatrixXd& points, double sigma, const SubtractiveConfig& sc,
                                         double min_separation = 0.0);

/// Same, with the cluster count fixed by the caller.
ClusterModel potential_sort_cluster(const Eigen::MatrixXd& points, double sigma, std::size_t k,
                                    double min_separation = 0.0, double r_a = 0.0);

/// Baseline centres from the gradient-descent dynamics: replicas are run to
/// their end positions, sorted by potential, and kept greedily when at least
/// sigma/2 from every kept centre, until k are found.
ClusterModel gradient_descent_cluster(const Eigen::MatrixXd& points, double sigma, std::size_t k,
                                      const GradientDescentConfig& gd);

void write_cluster_model(std::ostream& out, const ClusterModel& model);
ClusterModel read_cluster_model(std::istream& in);

}  // namespace qsanfis
