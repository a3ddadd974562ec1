#include "qsanfis/subtractive.hpp"

#include "qsanfis/text_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qsanfis {

namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index a, Eigen::Index b) {
  double d2 = 0.0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double diff = points(a, j) - points(b, j);
    d2 += diff * diff;
  }
  return d2;
}

}  // namespace

SubtractiveConfig::SubtractiveConfig(double r_a_, std::optional<double> r_b_)
    : r_a(r_a_), r_b(r_b_.value_or(1.5 * r_a_)) {}

void SubtractiveConfig::validate() const {
  if (!(r_a > 0.0)) throw std::invalid_argument("subtractive r_a must be positive");
  if (!(r_b > 0.0)) throw std::invalid_argument("subtractive r_b must be positive");
  if (!(accept_ratio > 0.0 && accept_ratio <= 1.0)) throw std::invalid_argument("accept_ratio must lie in (0, 1]");
  if (!(reject_ratio >= 0.0 && reject_ratio < accept_ratio))
    throw std::invalid_argument("reject_ratio must lie in [0, accept_ratio)");
  if (max_centers < 1) throw std::invalid_argument("max_centers must be at least 1");
}

Eigen::VectorXd density(const Eigen::MatrixXd& points, double r_a) {
  if (!(r_a > 0.0)) throw std::invalid_argument("density: r_a must be positive");
  if (points.rows() == 0) throw std::invalid_argument("density: no data points");
  const double scale = (r_a / 2.0) * (r_a / 2.0);
  Eigen::VectorXd d(points.rows());
  for (Eigen::Index k = 0; k < points.rows(); ++k) {
    double sum = 0.0;
    for (Eigen::Index other = 0; other < points.rows(); ++other) sum += std::exp(-squared_distance(points, k, other) / scale);
    d(k) = sum;
  }
  return d;
}

DensityState subtract(DensityState state, const Eigen::MatrixXd& points, double r_b) {
  if (state.selected.empty()) throw std::invalid_argument("subtract: no centre selected yet");
  if (!(r_b > 0.0)) throw std::invalid_argument("subtract: r_b must be positive");
  const auto center = static_cast<Eigen::Index>(state.selected.back());
  const double scale = (r_b / 2.0) * (r_b / 2.0);
  const double peak = state.density(center);
  for (Eigen::Index k = 0; k < points.rows(); ++k)
    state.density(k) -= peak * std::exp(-squared_distance(points, k, center) / scale);
  return state;
}

SubtractiveResult select_center_count(const Eigen::MatrixXd& points, const SubtractiveConfig& cfg) {
  cfg.validate();
  if (points.rows() == 0) throw std::invalid_argument("select_center_count: no data points");

  DensityState state{density(points, cfg.r_a), {}};
  SubtractiveResult result;
  double first = 0.0;

  while (true) {
    Eigen::Index candidate = 0;
    const double best = state.density.maxCoeff(&candidate);  // first maximal index
    SelectionStep step{static_cast<std::size_t>(candidate), best, 0.0, Verdict::Accepted};

    if (state.selected.empty()) {
      first = best;
      step.ratio = 1.0;
    } else {
      step.ratio = best / first;
      if (state.selected.size() >= cfg.max_centers) {
        step.verdict = Verdict::LimitReached;
        result.trace.push_back(step);
        break;
      }
      if (!(best > 0.0) || step.ratio < cfg.reject_ratio) {
        step.verdict = Verdict::Stopped;
        result.trace.push_back(step);
        break;
      }
      if (step.ratio <= cfg.accept_ratio) {
        double d_min = std::numeric_limits<double>::infinity();
        for (auto s : state.selected)
          d_min = std::min(d_min, std::sqrt(squared_distance(points, candidate, static_cast<Eigen::Index>(s))));
        if (d_min / cfg.r_a + step.ratio >= 1.0) {
          step.verdict = Verdict::AcceptedGray;
        } else {
          step.verdict = Verdict::RejectedGray;
          result.trace.push_back(step);
          state.density(candidate) = 0.0;
          continue;
        }
      }
    }

    result.trace.push_back(step);
    state.selected.push_back(static_cast<std::size_t>(candidate));
    result.center_densities.push_back(best);
    state = subtract(std::move(state), points, cfg.r_b);
  }

  result.k = state.selected.size();
  result.indices = state.selected;
  result.centers.resize(static_cast<Eigen::Index>(result.k), points.cols());
  for (std::size_t i = 0; i < result.k; ++i)
    result.centers.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(result.indices[i]));
  return result;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accepted: return "accept";
    case Verdict::AcceptedGray: return "accept-gray";
    case Verdict::RejectedGray: return "reject-gray";
    case Verdict::Stopped: return "stop";
    case Verdict::LimitReached: return "limit";
  }
  return "?";
}

void write_trace(std::ostream& out, const SubtractiveResult& result) {
  out << "step,index,density,ratio,verdict\n";
  for (std::size_t s = 0; s < result.trace.size(); ++s) {
    const auto& t = result.trace[s];
    out << s << ',' << t.candidate << ',' << format_double(t.density) << ',' << format_double(t.ratio) << ','
        << to_string(t.verdict) << '\n';
  }
}

}  // namespace qsanfis
