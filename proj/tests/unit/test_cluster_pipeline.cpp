#include "qsanfis/cluster_pipeline.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace qsanfis;

namespace {

std::vector<std::size_t> brute_force_assign(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& centers) {
  const auto p = oracle::to_points(pts), c = oracle::to_points(centers);
  std::vector<std::size_t> out;
  for (const auto& x : p) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.size(); ++k)
      if (oracle::dist2(x, c[k]) < oracle::dist2(x, c[best])) best = k;
    out.push_back(best);
  }
  return out;
}

void check_model_invariants(const ClusterModel& m, const Eigen::MatrixXd& pts) {
  REQUIRE(m.k() >= 1);
  CHECK(m.center_indices.size() == m.k());
  CHECK(std::set<std::size_t>(m.center_indices.begin(), m.center_indices.end()).size() == m.k());
  CHECK(m.assignments.size() == static_cast<std::size_t>(pts.rows()));
  std::vector<int> members(m.k(), 0);
  for (auto a : m.assignments) {
    REQUIRE(a < m.k());
    ++members[a];
  }
  for (std::size_t c = 0; c < m.k(); ++c) {
    CHECK(m.centers.row(static_cast<Eigen::Index>(c)) == pts.row(static_cast<Eigen::Index>(m.center_indices[c])));
    CHECK(members[c] >= 1);
  }
  CHECK((m.spread.array() >= kSpreadFloor).all());
}

}  // namespace

TEST_CASE("assign") {
  Eigen::MatrixXd centers(3, 2);
  centers << 0, 0, 1, 1, 2, 0;
  Eigen::MatrixXd p(1, 2);
  p << 2, 0;
  CHECK(assign(p, centers) == std::vector<std::size_t>{2});

  Eigen::MatrixXd c1(2, 1), p1(1, 1);
  c1 << 0.0, 1.0;
  p1 << 0.5;
  CHECK(assign(p1, c1) == std::vector<std::size_t>{0});

  std::mt19937 rng(17);
  const Eigen::MatrixXd pts = oracle::random_points(rng, 50, 3);
  const Eigen::MatrixXd cs = oracle::random_points(rng, 6, 3);
  CHECK(assign(pts, cs) == brute_force_assign(pts, cs));

  CHECK_THROWS(assign(pts, Eigen::MatrixXd(0, 3)));
  CHECK_THROWS(assign(pts, Eigen::MatrixXd::Zero(2, 2)));
}

TEST_CASE("cluster_spread") {
  Eigen::MatrixXd pts(4, 2);
  pts << 0.0, 0.5, 1.0, 0.5, 0.3, 0.3, 0.3, 0.3;
  const auto s = cluster_spread(pts, {0, 0, 1, 1}, 3);
  CHECK(s(0, 0) == doctest::Approx(0.5));
  CHECK(s(0, 1) == kSpreadFloor);
  CHECK(s(1, 0) == kSpreadFloor);
  CHECK(s.row(2).isConstant(kSpreadFloor));
  CHECK_THROWS(cluster_spread(pts, {0, 0, 1, 5}, 3));
}

TEST_CASE("potential sort takes the k lowest potentials") {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd pts = oracle::random_points(rng, 40, 3);
    const double sigma = 0.2;
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 7);
    const auto m = potential_sort_cluster(pts, sigma, k);
    check_model_invariants(m, pts);

    const auto field = potential_field(pts, sigma);
    std::vector<double> all(field.v.data(), field.v.data() + field.v.size());
    std::sort(all.begin(), all.end());
    std::vector<double> chosen;
    for (auto i : m.center_indices) chosen.push_back(field.v(static_cast<Eigen::Index>(i)));
    std::sort(chosen.begin(), chosen.end());
    CHECK(chosen == std::vector<double>(all.begin(), all.begin() + static_cast<long>(k)));
    CHECK(m.center_indices.front() == field.argmin);
    CHECK(m.assignments == brute_force_assign(pts, m.centers));
  }
}

TEST_CASE("quantum_subtractive_cluster examples") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  SUBCASE("single tight blob") {
    Eigen::MatrixXd pts(15, 2);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) pts.row(i) << 0.4 + jitter(rng), 0.6 + jitter(rng);
    const auto m = quantum_subtractive_cluster(pts, 0.1, SubtractiveConfig(0.5));
    check_model_invariants(m, pts);
    CHECK(m.k() == 1);
    std::size_t argmin = 0;
    double best = potential(pts.row(0).transpose(), pts, 0.1);
    for (Eigen::Index i = 1; i < pts.rows(); ++i) {
      const double t = potential(pts.row(i).transpose(), pts, 0.1);
      if (t < best) best = t, argmin = static_cast<std::size_t>(i);
    }
    CHECK(m.center_indices.front() == argmin);
  }
  SUBCASE("two symmetric blobs with separation on") {
    Eigen::MatrixXd pts(40, 1);
    for (Eigen::Index i = 0; i < 20; ++i) {
      const double off = jitter(rng);
      pts(i, 0) = 0.2 + off;
      pts(i + 20, 0) = 0.8 - off;
    }
    const auto m = quantum_subtractive_cluster(pts, 0.05, SubtractiveConfig(0.3), 0.1);
    check_model_invariants(m, pts);
    REQUIRE(m.k() == 2);
    CHECK((m.center_indices[0] < 20) != (m.center_indices[1] < 20));
  }
  SUBCASE("unequal blobs, no separation: both centres may share a basin") {
    // a dense blob of two stacked sites and a sparse, spread-out one
    Eigen::MatrixXd pts(30, 1);
    for (Eigen::Index i = 0; i < 24; ++i) pts(i, 0) = i % 2 ? 0.2 : 0.201;
    for (Eigen::Index i = 24; i < 30; ++i) pts(i, 0) = 0.78 + 0.008 * static_cast<double>(i - 24);
    const auto literal = potential_sort_cluster(pts, 0.05, 2);
    check_model_invariants(literal, pts);
    CHECK(literal.center_indices[0] < 24);
    CHECK(literal.center_indices[1] < 24);
    const auto separated = potential_sort_cluster(pts, 0.05, 2, 0.15);
    CHECK((separated.center_indices[0] < 24) != (separated.center_indices[1] < 24));
  }
  SUBCASE("duplicates") {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(8, 3, 0.5);
    const auto m = quantum_subtractive_cluster(pts, 0.2, SubtractiveConfig(0.5));
    CHECK(m.k() == 1);
    CHECK(m.assignments == std::vector<std::size_t>(8, 0));
    CHECK(m.spread.isConstant(kSpreadFloor));
  }
}

TEST_CASE("separation relaxes when the walk runs out") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 0.1, 0.2, 0.3;
  const auto m = potential_sort_cluster(pts, 0.2, 3, 5.0);
  check_model_invariants(m, pts);
  CHECK(m.k() == 3);
}

TEST_CASE("more centres than distinct points is an error") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 0.0, 1.0, 1.0;
  CHECK_THROWS(potential_sort_cluster(pts, 0.2, 3));
  CHECK_THROWS(potential_sort_cluster(pts, 0.2, 0));
  CHECK_THROWS(potential_sort_cluster(pts, 0.2, 1, -1.0));
}

TEST_CASE("clustering is deterministic and serializes losslessly") {
  std::mt19937 rng(88);
  const Eigen::MatrixXd pts = oracle::random_points(rng, 60, 4);
  const auto a = quantum_subtractive_cluster(pts, 0.25, SubtractiveConfig(0.4));
  const auto b = quantum_subtractive_cluster(pts, 0.25, SubtractiveConfig(0.4));
  CHECK(a.center_indices == b.center_indices);
  CHECK(a.assignments == b.assignments);
  CHECK(a.spread == b.spread);

  std::stringstream buffer;
  write_cluster_model(buffer, a);
  const auto back = read_cluster_model(buffer);
  CHECK(back.centers == a.centers);
  CHECK(back.center_indices == a.center_indices);
  CHECK(back.assignments == a.assignments);
  CHECK(back.spread == a.spread);
  CHECK(back.sigma == a.sigma);
  CHECK(back.r_a == a.r_a);

  std::istringstream junk("clusters two\n");
  CHECK_THROWS(read_cluster_model(junk));
}

TEST_CASE("gradient-descent baseline centres") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  Eigen::MatrixXd pts(30, 2);
  for (Eigen::Index i = 0; i < 15; ++i) {
    pts.row(i) << 0.2 + jitter(rng), 0.2 + jitter(rng);
    pts.row(i + 15) << 0.8 + jitter(rng), 0.7 + jitter(rng);
  }
  const auto m = gradient_descent_cluster(pts, 0.1, 2, GradientDescentConfig::defaults_for(0.1));
  // centres are replica end positions, so they need not coincide with samples
  REQUIRE(m.k() == 2);
  CHECK((m.center_indices[0] < 15) != (m.center_indices[1] < 15));
  CHECK(m.assignments == brute_force_assign(pts, m.centers));
  CHECK((m.spread.array() >= kSpreadFloor).all());
  CHECK_THROWS(gradient_descent_cluster(pts, 0.1, 31, GradientDescentConfig::defaults_for(0.1)));
}
