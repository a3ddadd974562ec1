#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>

namespace qsanfis {

struct KernelConfig {
  double sigma = 0.25;  ///< Parzen width, normalized-data units
  void validate() const;
};

/// Parzen wave function: sum_i exp(-|x - x_i|^2 / (2 sigma^2)). Rows of
/// `points` are the x_i.
double wave_function(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma);

/// Un-offset potential T(x) = (sigma^2/2) lap(psi)/psi, closed form
///
///   T(x) = -d/2 + sum_i |x-x_i|^2 e_i / (2 sigma^2 psi(x)).
///
/// The Schroedinger potential is V = E + T with E chosen by potential_field.
/// Throws std::domain_error when psi(x) < 1e-300.
double potential(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma);

/// Analytic gradient of T (equal to the gradient of V).
Eigen::VectorXd potential_gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma);

/// V evaluated at every data point, shifted so the smallest is exactly zero.
struct PotentialField {
  Eigen::MatrixXd points;
  double sigma = 0.0;
  double energy = 0.0;  ///< E = -min_k T(x_k)
  Eigen::VectorXd v;
  std::size_t argmin = 0;

  /// E + T(x) at an arbitrary location.
  double at(const Eigen::VectorXd& x) const { return energy + potential(x, points, sigma); }
};

PotentialField potential_field(const Eigen::MatrixXd& points, double sigma);

/// Columns: index, x0..x{d-1}, v
void write_potential_table(std::ostream& out, const PotentialField& field);

struct GradientDescentConfig {
  double eta = 0.0;  ///< constant step, the time increment folded in
  int steps = 200;

  /// eta = 0.01 sigma^2
  static GradientDescentConfig defaults_for(double sigma, int steps = 200);
  void validate() const;
};

/// Classic quantum clustering: every z_k starts at x_k and follows
/// z <- z - eta grad V(z). Throws std::runtime_error naming the step if a
/// replica runs further than 10 bounding-box diagonals from the data.
Eigen::MatrixXd qc_gradient_descent(const Eigen::MatrixXd& points, double sigma, const GradientDescentConfig& cfg);

}  // namespace qsanfis
