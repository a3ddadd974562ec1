#include "qsanfis/dataset.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace qsanfis;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("qsanfis_dataset_" + name);
  std::ofstream(path) << contents;
  return path;
}

const std::filesystem::path kMpg = std::filesystem::path(QSANFIS_SOURCE_DIR) / "data" / "auto-mpg.csv";
const std::vector<std::string> kMpgInputs = {"cylinders", "displacement", "horsepower",
                                             "weight",    "acceleration", "model_year"};

}  // namespace

TEST_CASE("load_csv drops records carrying the missing token") {
  SUBCASE("auto-mpg: 398 rows, 6 with '?' horsepower") {
    const auto d = load_csv(kMpg, "mpg", "?", kMpgInputs);
    CHECK(d.size() == 392);
    CHECK(d.input_dim() == 6);
    CHECK(d.input_names() == kMpgInputs);
  }
  SUBCASE("no missing tokens keeps file order") {
    std::string text = "a,b,y\n";
    for (int i = 0; i < 10; ++i) text += std::to_string(i) + "," + std::to_string(2 * i) + "," + std::to_string(i * i) + "\n";
    const auto d = load_csv(temp_file("ten.csv", text), "y");
    REQUIRE(d.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(d.inputs()(static_cast<Eigen::Index>(i), 0) == static_cast<double>(i));
      CHECK(d.record_ids()[i] == i + 1);
    }
  }
  SUBCASE("3 rows, row 2 missing") {
    const auto d = load_csv(temp_file("three.csv", "x,y\n1,10\n?,20\n3,30\n"), "y");
    REQUIRE(d.size() == 2);
    CHECK(d.targets()(0) == 10.0);
    CHECK(d.targets()(1) == 30.0);
    CHECK(d.record_ids() == std::vector<std::size_t>{1, 3});
  }
  SUBCASE("missing token only matters in selected columns") {
    const auto d = load_csv(temp_file("unsel.csv", "x,name,y\n1,?,10\n2,car,20\n"), "y", "?", {"x"});
    CHECK(d.size() == 2);
  }
}

TEST_CASE("load_csv errors") {
  CHECK_THROWS(load_csv("/nonexistent/qsanfis.csv", "y"));
  CHECK_THROWS(load_csv(temp_file("e1.csv", "x,y\n1,2\n"), "z"));
  CHECK_THROWS(load_csv(temp_file("e2.csv", "x,y\n1,abc\n"), "y"));
  CHECK_THROWS(load_csv(temp_file("e3.csv", "x,y\n?,2\n1,?\n"), "y"));
  CHECK_THROWS(load_csv(temp_file("e4.csv", "x,y\n1,2,3\n"), "y"));
  CHECK_THROWS(load_csv(temp_file("e5.csv", "x,y\n1,2\n"), "y", "?", {"y"}));
}

TEST_CASE("normalize_minmax") {
  Eigen::MatrixXd x(3, 2);
  x << 10, 5, 20, 5, 30, 5;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  const Dataset d({"a", "c"}, "y", x, y, {1, 2, 3});
  const auto [n, params] = normalize_minmax(d);
  CHECK(n.inputs()(0, 0) == 0.0);
  CHECK(n.inputs()(1, 0) == 0.5);
  CHECK(n.inputs()(2, 0) == 1.0);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(n.inputs()(i, 1) == 0.0);
  CHECK_FALSE(params.constant[0]);
  CHECK(params.constant[1]);
  CHECK(params.min[1] == 5.0);
  CHECK(n.targets()(2) == 1.0);

  CHECK_THROWS_AS(normalize_minmax(Dataset({"a"}, "y", Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), {})),
                  std::invalid_argument);
}

TEST_CASE("normalized MPG lies in [0,1] and de-normalizes back") {
  const auto raw = load_csv(kMpg, "mpg", "?", kMpgInputs);
  const auto [n, params] = normalize_minmax(raw);
  // scan every emitted value of the written file, not the in-memory matrix
  std::stringstream buffer;
  write_csv(buffer, n);
  std::string line;
  std::getline(buffer, line);
  std::size_t rows = 0;
  while (std::getline(buffer, line)) {
    ++rows;
    std::stringstream fields(line);
    std::string f;
    std::size_t cols = 0;
    while (std::getline(fields, f, ',')) {
      ++cols;
      const double v = std::stod(f);
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
    CHECK(cols == 7);
  }
  CHECK(rows == 392);

  const auto back = denormalize(n, params);
  for (Eigen::Index i = 0; i < raw.inputs().rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.inputs().cols(); ++j)
      CHECK(std::abs(back.inputs()(i, j) - raw.inputs()(i, j)) <= 1e-9 * std::abs(raw.inputs()(i, j)));
    CHECK(std::abs(back.targets()(i) - raw.targets()(i)) <= 1e-9 * std::abs(raw.targets()(i)));
  }
}

TEST_CASE("split_even_odd") {
  auto make = [](std::size_t n) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 1);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      x(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
      y(static_cast<Eigen::Index>(i)) = static_cast<double>(i);
      ids.push_back(100 + i);
    }
    return Dataset({"x"}, "y", x, y, ids);
  };

  SUBCASE("392 -> 196 + 196") {
    const auto s = split_even_odd(make(392));
    CHECK(s.train.size() == 196);
    CHECK(s.test.size() == 196);
    CHECK(s.warnings.empty());
  }
  SUBCASE("train takes even 1-based positions by default") {
    const auto s = split_even_odd(make(5));
    CHECK(s.train.size() == 2);
    CHECK(s.test.size() == 3);
    CHECK(s.train.record_ids() == std::vector<std::size_t>{101, 103});
    const auto swapped = split_even_odd(make(5), SplitParity::TrainOdd);
    CHECK(swapped.train.size() == 3);
    CHECK(swapped.test.size() == 2);
  }
  SUBCASE("single sample leaves one side empty with a warning") {
    const auto s = split_even_odd(make(1));
    CHECK(s.train.empty());
    CHECK(s.test.size() == 1);
    CHECK(s.warnings.size() == 1);
    const auto swapped = split_even_odd(make(1), SplitParity::TrainOdd);
    CHECK(swapped.train.size() == 1);
    CHECK(swapped.test.empty());
  }
  SUBCASE("partition property") {
    for (std::size_t n : {2u, 7u, 50u, 391u}) {
      const auto s = split_even_odd(make(n));
      std::set<std::size_t> seen;
      for (auto id : s.train.record_ids()) seen.insert(id);
      for (auto id : s.test.record_ids()) CHECK(seen.insert(id).second);
      CHECK(seen.size() == n);
      CHECK(std::max(s.train.size(), s.test.size()) - std::min(s.train.size(), s.test.size()) <= 1);
    }
  }
  CHECK_THROWS(split_even_odd(Dataset({"x"}, "y", Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), {})));
}

TEST_CASE("load, normalize and split are deterministic") {
  auto run = [] {
    const auto raw = load_csv(kMpg, "mpg", "?", kMpgInputs);
    const auto s = split_even_odd(normalize_minmax(raw).first);
    std::stringstream out;
    write_csv(out, s.train);
    write_csv(out, s.test);
    return out.str();
  };
  CHECK(run() == run());
}

TEST_CASE("write_csv output loads back identically") {
  const auto raw = load_csv(kMpg, "mpg", "?", kMpgInputs);
  const auto n = normalize_minmax(raw).first;
  const auto path = std::filesystem::temp_directory_path() / "qsanfis_dataset_roundtrip.csv";
  write_csv(path, n);
  const auto back = load_csv(path, "mpg");
  CHECK(back.input_names() == n.input_names());
  CHECK(back.inputs() == n.inputs());
  CHECK(back.targets() == n.targets());
}

TEST_CASE("norm params file round-trips") {
  const auto raw = load_csv(kMpg, "mpg", "?", kMpgInputs);
  const auto params = normalize_minmax(raw).second;
  const auto path = std::filesystem::temp_directory_path() / "qsanfis_norm.csv";
  write_norm_params(path, params);
  const auto back = read_norm_params(path);
  CHECK(back.names == params.names);
  CHECK(back.min == params.min);
  CHECK(back.max == params.max);
  CHECK(back.constant == params.constant);
}
