#include "qsanfis/quantum_potential.hpp"

#include "qsanfis/text_io.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsanfis {

namespace {

constexpr double kPsiFloor = 1e-300;

void check_args(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
  if (points.rows() == 0) throw std::invalid_argument("need at least one data point");
  if (x.size() != points.cols())
    throw std::invalid_argument("dimension mismatch: x has " + std::to_string(x.size()) + " components, points have " +
                                std::to_string(points.cols()));
}

double squared_distance(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, Eigen::Index i) {
  double d2 = 0.0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double diff = x(j) - points(i, j);
    d2 += diff * diff;
  }
  return d2;
}

// psi and sum_i d2_i e_i, both accumulated in long double.
struct KernelSums {
  long double psi = 0.0L;
  long double weighted = 0.0L;
};

KernelSums kernel_sums(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma) {
  const double two_s2 = 2.0 * sigma * sigma;
  KernelSums s;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d2 = squared_distance(x, points, i);
    const double e = std::exp(-d2 / two_s2);
    s.psi += e;
    s.weighted += static_cast<long double>(d2) * e;
  }
  return s;
}

}  // namespace

void KernelConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
}

double wave_function(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma) {
  check_args(x, points, sigma);
  return static_cast<double>(kernel_sums(x, points, sigma).psi);
}

double potential(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma) {
  check_args(x, points, sigma);
  const auto s = kernel_sums(x, points, sigma);
  if (s.psi < kPsiFloor) throw std::domain_error("evaluation point too far from data: wave function underflows");
  const long double d = static_cast<long double>(points.cols());
  const long double s2 = static_cast<long double>(sigma) * sigma;
  return static_cast<double>(-d / 2.0L + s.weighted / (2.0L * s2 * s.psi));
}

Eigen::VectorXd potential_gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& points, double sigma) {
  check_args(x, points, sigma);
  // T = -d/2 + S/(2 s2 psi) with S = sum d2_i e_i, so
  // grad T = (psi grad S - S grad psi) / (2 s2 psi^2),
  // grad psi = -sum e_i (x-x_i)/s2,  grad S = sum e_i (x-x_i)(2 - d2_i/s2).
  const auto dim = points.cols();
  const double s2 = sigma * sigma;
  long double psi = 0.0L, weighted = 0.0L;
  std::vector<long double> grad_psi(static_cast<std::size_t>(dim), 0.0L), grad_weighted(static_cast<std::size_t>(dim), 0.0L);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d2 = squared_distance(x, points, i);
    const double e = std::exp(-d2 / (2.0 * s2));
    psi += e;
    weighted += static_cast<long double>(d2) * e;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const long double diff = x(j) - points(i, j);
      grad_psi[static_cast<std::size_t>(j)] -= e * diff / s2;
      grad_weighted[static_cast<std::size_t>(j)] += e * diff * (2.0L - d2 / s2);
    }
  }
  if (psi < kPsiFloor) throw std::domain_error("evaluation point too far from data: wave function underflows");
  Eigen::VectorXd grad(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto k = static_cast<std::size_t>(j);
    grad(j) = static_cast<double>((psi * grad_weighted[k] - weighted * grad_psi[k]) / (2.0L * s2 * psi * psi));
  }
  return grad;
}

PotentialField potential_field(const Eigen::MatrixXd& points, double sigma) {
  if (points.rows() == 0) throw std::invalid_argument("potential_field: no data points");
  PotentialField field;
  field.points = points;
  field.sigma = sigma;
  Eigen::VectorXd t(points.rows());
  for (Eigen::Index k = 0; k < points.rows(); ++k) t(k) = potential(points.row(k).transpose(), points, sigma);
  Eigen::Index argmin = 0;
  const double t_min = t.minCoeff(&argmin);
  field.energy = -t_min;
  field.v = t.array() + field.energy;
  field.v(argmin) = 0.0;
  field.argmin = static_cast<std::size_t>(argmin);
  return field;
}

void write_potential_table(std::ostream& out, const PotentialField& field) {
  out << "index";
  for (Eigen::Index j = 0; j < field.points.cols(); ++j) out << ",x" << j;
  out << ",v\n";
  for (Eigen::Index k = 0; k < field.points.rows(); ++k) {
    out << k;
    for (Eigen::Index j = 0; j < field.points.cols(); ++j) out << ',' << format_double(field.points(k, j));
    out << ',' << format_double(field.v(k)) << '\n';
  }
}

GradientDescentConfig GradientDescentConfig::defaults_for(double sigma, int steps) {
  return {0.01 * sigma * sigma, steps};
}

void GradientDescentConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("gradient descent eta must be positive");
  if (steps < 1) throw std::invalid_argument("gradient descent needs at least one step");
}

Eigen::MatrixXd qc_gradient_descent(const Eigen::MatrixXd& points, double sigma, const GradientDescentConfig& cfg) {
  cfg.validate();
  KernelConfig{sigma}.validate();
  if (points.rows() == 0) throw std::invalid_argument("qc_gradient_descent: no data points");

  const Eigen::RowVectorXd lo = points.colwise().minCoeff();
  const Eigen::RowVectorXd hi = points.colwise().maxCoeff();
  const Eigen::RowVectorXd centre = (lo + hi) / 2.0;
  const double limit = 10.0 * std::max((hi - lo).norm(), sigma);

  Eigen::MatrixXd z = points;
  for (int step = 1; step <= cfg.steps; ++step) {
    for (Eigen::Index k = 0; k < z.rows(); ++k) {
      const Eigen::VectorXd grad = potential_gradient(z.row(k).transpose(), points, sigma);
      z.row(k) -= cfg.eta * grad.transpose();
      if (!z.row(k).allFinite() || (z.row(k) - centre).norm() > limit)
        throw std::runtime_error("quantum clustering gradient descent diverged at step " + std::to_string(step) +
                                 " (replica " + std::to_string(k) + ")");
    }
  }
  return z;
}

}  // namespace qsanfis
