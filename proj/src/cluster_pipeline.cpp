#include "qsanfis/cluster_pipeline.hpp"

#include "qsanfis/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsanfis {

namespace {

std::size_t count_distinct_rows(const Eigen::MatrixXd& points) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(points.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      const double x = points(static_cast<Eigen::Index>(a), j), y = points(static_cast<Eigen::Index>(b), j);
      if (x != y) return x < y;
    }
    return false;
  };
  std::sort(rows.begin(), rows.end(), less);
  std::size_t distinct = rows.empty() ? 0 : 1;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (less(rows[i - 1], rows[i])) ++distinct;
  return distinct;
}

std::vector<std::size_t> ascending_order(const Eigen::VectorXd& values) {
  std::vector<std::size_t> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values(static_cast<Eigen::Index>(a)) < values(static_cast<Eigen::Index>(b));
  });
  return order;
}

void expect_line(std::istream& in, std::string& line, const char* what) {
  while (std::getline(in, line))
    if (!trim(line).empty()) return;
  throw std::runtime_error(std::string("cluster model: unexpected end of input, expected ") + what);
}

std::vector<std::string> keyed_fields(std::istream& in, const std::string& key) {
  std::string line;
  expect_line(in, line, key.c_str());
  auto fields = split_fields(line, ' ');
  fields.erase(std::remove(fields.begin(), fields.end(), std::string()), fields.end());
  if (fields.empty() || fields[0] != key) throw std::runtime_error("cluster model: expected '" + key + "', got '" + line + "'");
  fields.erase(fields.begin());
  return fields;
}

}  // namespace

std::vector<std::size_t> assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers) {
  if (centers.rows() < 1) throw std::invalid_argument("assign: need at least one centre");
  if (points.cols() != centers.cols()) throw std::invalid_argument("assign: dimension mismatch");
  std::vector<std::size_t> labels(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Eigen::Index best = 0;
    double best_d2 = (points.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < centers.rows(); ++c) {
      const double d2 = (points.row(i) - centers.row(c)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return labels;
}

Eigen::MatrixXd cluster_spread(const Eigen::MatrixXd& points, const std::vector<std::size_t>& assignments,
                               std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(kk, points.cols());
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(kk, points.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(kk);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(assignments.at(static_cast<std::size_t>(i)));
    if (c >= kk) throw std::invalid_argument("cluster_spread: assignment out of range");
    sum.row(c) += points.row(i);
    count(c) += 1.0;
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(assignments[static_cast<std::size_t>(i)]);
    sum_sq.row(c) += (points.row(i) - sum.row(c) / count(c)).array().square().matrix();
  }
  Eigen::MatrixXd spread = Eigen::MatrixXd::Constant(kk, points.cols(), kSpreadFloor);
  for (Eigen::Index c = 0; c < kk; ++c) {
    if (count(c) == 0.0) continue;
    spread.row(c) = (sum_sq.row(c) / count(c)).array().sqrt().max(kSpreadFloor).matrix();
  }
  return spread;
}

ClusterModel potential_sort_cluster(const Eigen::MatrixXd& points, double sigma, std::size_t k,
                                    double min_separation, double r_a) {
  if (points.rows() == 0) throw std::invalid_argument("clustering needs at least one sample");
  if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (min_separation < 0.0) throw std::invalid_argument("min_separation must be non-negative");
  const auto distinct = count_distinct_rows(points);
  if (k > distinct)
    throw std::runtime_error("requested " + std::to_string(k) + " centres but data has only " +
                             std::to_string(distinct) + " distinct points");

  const auto field = potential_field(points, sigma);
  const auto order = ascending_order(field.v);

  std::vector<std::size_t> chosen;
  double separation = min_separation;
  while (chosen.size() < k) {
    for (auto idx : order) {
      if (chosen.size() == k) break;
      if (std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) continue;
      bool clear = true;
      for (auto c : chosen) {
        const double dist = (points.row(static_cast<Eigen::Index>(idx)) - points.row(static_cast<Eigen::Index>(c))).norm();
        if (dist <= separation) {
          clear = false;
          break;
        }
      }
      if (clear) chosen.push_back(idx);
    }
    // Halving never reaches 0 exactly; below the data's resolution it is 0.
    separation = separation / 2.0 < 1e-12 ? 0.0 : separation / 2.0;
  }

  ClusterModel model;
  model.sigma = sigma;
  model.r_a = r_a;
  model.center_indices = chosen;
  model.centers.resize(static_cast<Eigen::Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c)
    model.centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(chosen[c]));
  model.assignments = assign(points, model.centers);
  model.spread = cluster_spread(points, model.assignments, k);
  return model;
}

ClusterModel quantum_subtractive_cluster(const Eigen::MatrixXd& points, double sigma, const SubtractiveConfig& sc,
                                         double min_separation) {
  const auto count = select_center_count(points, sc);
  return potential_sort_cluster(points, sigma, count.k, min_separation, sc.r_a);
}

ClusterModel gradient_descent_cluster(const Eigen::MatrixXd& points, double sigma, std::size_t k,
                                      const GradientDescentConfig& gd) {
  if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (k > static_cast<std::size_t>(points.rows())) throw std::runtime_error("more centres requested than samples");
  const Eigen::MatrixXd z = qc_gradient_descent(points, sigma, gd);

  Eigen::VectorXd v(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) v(i) = potential(z.row(i).transpose(), points, sigma);
  const auto order = ascending_order(v);

  std::vector<std::size_t> chosen;
  const double merge = sigma / 2.0;
  for (auto idx : order) {
    if (chosen.size() == k) break;
    bool clear = true;
    for (auto c : chosen)
      if ((z.row(static_cast<Eigen::Index>(idx)) - z.row(static_cast<Eigen::Index>(c))).norm() < merge) {
        clear = false;
        break;
      }
    if (clear) chosen.push_back(idx);
  }
  // Fewer basins than k: fill with the lowest remaining end positions.
  for (auto idx : order) {
    if (chosen.size() == k) break;
    if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
  }

  ClusterModel model;
  model.sigma = sigma;
  model.center_indices = chosen;
  model.centers.resize(static_cast<Eigen::Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c)
    model.centers.row(static_cast<Eigen::Index>(c)) = z.row(static_cast<Eigen::Index>(chosen[c]));
  model.assignments = assign(points, model.centers);
  model.spread = cluster_spread(points, model.assignments, k);
  return model;
}

void write_cluster_model(std::ostream& out, const ClusterModel& model) {
  out << "clusters " << model.k() << ' ' << model.dim() << '\n';
  out << "sigma " << format_double(model.sigma) << '\n';
  out << "r_a " << format_double(model.r_a) << '\n';
  for (std::size_t c = 0; c < model.k(); ++c) {
    const auto r = static_cast<Eigen::Index>(c);
    out << "center " << c << ' ' << model.center_indices[c];
    for (Eigen::Index j = 0; j < model.centers.cols(); ++j) out << ' ' << format_double(model.centers(r, j));
    out << '\n' << "spread " << c;
    for (Eigen::Index j = 0; j < model.spread.cols(); ++j) out << ' ' << format_double(model.spread(r, j));
    out << '\n';
  }
  out << "assignments " << model.assignments.size();
  for (auto a : model.assignments) out << ' ' << a;
  out << '\n';
}

ClusterModel read_cluster_model(std::istream& in) {
  auto head = keyed_fields(in, "clusters");
  if (head.size() != 2) throw std::runtime_error("cluster model: malformed header");
  const auto k = std::stoul(head[0]);
  const auto d = std::stoul(head[1]);
  ClusterModel model;
  model.sigma = parse_double(keyed_fields(in, "sigma").at(0));
  model.r_a = parse_double(keyed_fields(in, "r_a").at(0));
  model.centers.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  model.spread.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < k; ++c) {
    auto f = keyed_fields(in, "center");
    if (f.size() != d + 2 || std::stoul(f[0]) != c) throw std::runtime_error("cluster model: malformed center line");
    model.center_indices.push_back(std::stoul(f[1]));
    for (std::size_t j = 0; j < d; ++j)
      model.centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = parse_double(f[j + 2]);
    auto s = keyed_fields(in, "spread");
    if (s.size() != d + 1) throw std::runtime_error("cluster model: malformed spread line");
    for (std::size_t j = 0; j < d; ++j)
      model.spread(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = parse_double(s[j + 1]);
  }
  auto a = keyed_fields(in, "assignments");
  if (a.empty() || a.size() != std::stoul(a[0]) + 1) throw std::runtime_error("cluster model: malformed assignments");
  for (std::size_t i = 1; i < a.size(); ++i) model.assignments.push_back(std::stoul(a[i]));
  return model;
}

}  // namespace qsanfis
