#include "qsanfis/dataset.hpp"

#include "qsanfis/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace qsanfis {

Dataset::Dataset(std::vector<std::string> input_names, std::string target_name, Eigen::MatrixXd inputs,
                 Eigen::VectorXd targets, std::vector<std::size_t> record_ids)
    : input_names_(std::move(input_names)),
      target_name_(std::move(target_name)),
      inputs_(std::move(inputs)),
      targets_(std::move(targets)),
      record_ids_(std::move(record_ids)) {
  if (inputs_.rows() != targets_.size() || record_ids_.size() != static_cast<std::size_t>(targets_.size()))
    throw std::invalid_argument("Dataset: row counts of inputs, targets and record ids differ");
  if (static_cast<std::size_t>(inputs_.cols()) != input_names_.size())
    throw std::invalid_argument("Dataset: input column count does not match input names");
}

Sample Dataset::sample(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Dataset::sample: index out of range");
  Sample s;
  s.inputs.resize(input_dim());
  for (std::size_t j = 0; j < input_dim(); ++j) s.inputs[j] = inputs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  s.target = targets_(static_cast<Eigen::Index>(i));
  return s;
}

Dataset Dataset::select(const std::vector<std::size_t>& rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), inputs_.cols());
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  std::vector<std::size_t> ids;
  ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) throw std::out_of_range("Dataset::select: row out of range");
    const auto src = static_cast<Eigen::Index>(rows[r]);
    x.row(static_cast<Eigen::Index>(r)) = inputs_.row(src);
    y(static_cast<Eigen::Index>(r)) = targets_(src);
    ids.push_back(record_ids_[rows[r]]);
  }
  return Dataset(input_names_, target_name_, std::move(x), std::move(y), std::move(ids));
}

double NormParams::normalize(std::size_t column, double raw) const {
  if (constant.at(column)) return 0.0;
  return (raw - min[column]) / (max[column] - min[column]);
}

double NormParams::denormalize(std::size_t column, double normalized) const {
  if (constant.at(column)) return min[column];
  return min[column] + normalized * (max[column] - min[column]);
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::filesystem::path& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::runtime_error(path.string() + ": unknown column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

struct ColumnTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
  std::vector<std::size_t> ids;
};

// Reads the named columns; a record is dropped when any of them holds the
// missing token. Other columns are never parsed.
ColumnTable read_columns(const std::filesystem::path& path, const std::vector<std::string>& columns,
                         const std::string& missing_token, const std::string& reserved = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path.string());
  ColumnTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header row");
  table.header = split_fields(line);

  std::vector<std::string> selected = columns;
  if (selected.empty())
    for (const auto& name : table.header)
      if (name != reserved) selected.push_back(name);
  std::vector<std::size_t> idx;
  for (const auto& name : selected) idx.push_back(column_index(table.header, name, path));
  if (!reserved.empty()) idx.push_back(column_index(table.header, reserved, path));
  const auto width = table.header.size();
  table.header = selected;

  std::vector<double> flat;
  std::size_t line_no = 1;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++record;
    const auto fields = split_fields(line);
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != width)
      throw std::runtime_error(where + ": expected " + std::to_string(width) + " fields, found " +
                               std::to_string(fields.size()));
    std::vector<double> values;
    bool missing = false;
    for (auto c : idx) {
      if (fields[c] == missing_token) {
        missing = true;
        continue;
      }
      try {
        values.push_back(parse_double(fields[c]));
      } catch (const std::invalid_argument&) {
        throw std::runtime_error(where + ": non-numeric value '" + fields[c] + "'");
      }
    }
    if (missing) continue;
    flat.insert(flat.end(), values.begin(), values.end());
    table.ids.push_back(record);
  }
  const auto rows = static_cast<Eigen::Index>(table.ids.size());
  const auto cols = static_cast<Eigen::Index>(idx.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), rows, cols);
  return table;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column, const std::string& missing_token,
                 const std::vector<std::string>& input_columns) {
  if (std::find(input_columns.begin(), input_columns.end(), target_column) != input_columns.end())
    throw std::invalid_argument("target column '" + target_column + "' cannot also be an input");
  auto table = read_columns(path, input_columns, missing_token, target_column);
  if (table.ids.empty()) throw std::runtime_error(path.string() + ": no records left after dropping missing values");
  const auto n = table.values.cols() - 1;
  Eigen::MatrixXd x = table.values.leftCols(n);
  Eigen::VectorXd y = table.values.col(n);
  return Dataset(std::move(table.header), target_column, std::move(x), std::move(y), std::move(table.ids));
}

Dataset load_inputs_csv(const std::filesystem::path& path, const std::vector<std::string>& input_columns,
                        const std::string& missing_token) {
  if (input_columns.empty()) throw std::invalid_argument("load_inputs_csv: no input columns named");
  auto table = read_columns(path, input_columns, missing_token);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(table.values.rows());
  return Dataset(std::move(table.header), "", std::move(table.values), std::move(y), std::move(table.ids));
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (const auto& name : data.input_names()) out << name << ',';
  out << data.target_name() << '\n';
  for (Eigen::Index i = 0; i < data.inputs().rows(); ++i) {
    for (Eigen::Index j = 0; j < data.inputs().cols(); ++j) out << format_double(data.inputs()(i, j)) << ',';
    out << format_double(data.targets()(i)) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, data);
}

std::pair<Dataset, NormParams> normalize_minmax(const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("normalize_minmax: empty dataset");
  NormParams params;
  params.names = data.input_names();
  params.names.push_back(data.target_name());
  const auto cols = params.names.size();
  params.min.resize(cols);
  params.max.resize(cols);
  params.constant.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const bool is_target = c + 1 == cols;
    const double lo = is_target ? data.targets().minCoeff() : data.inputs().col(static_cast<Eigen::Index>(c)).minCoeff();
    const double hi = is_target ? data.targets().maxCoeff() : data.inputs().col(static_cast<Eigen::Index>(c)).maxCoeff();
    params.min[c] = lo;
    params.max[c] = hi;
    params.constant[c] = hi == lo;
  }
  return {apply_normalization(data, params), params};
}

Dataset apply_normalization(const Dataset& data, const NormParams& params) {
  if (params.columns() != data.input_dim() + 1)
    throw std::invalid_argument("normalization parameters do not match dataset columns");
  Eigen::MatrixXd x = data.inputs();
  Eigen::VectorXd y = data.targets();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = params.normalize(static_cast<std::size_t>(j), x(i, j));
    y(i) = params.normalize(params.columns() - 1, y(i));
  }
  return Dataset(data.input_names(), data.target_name(), std::move(x), std::move(y), data.record_ids());
}

Dataset denormalize(const Dataset& data, const NormParams& params) {
  if (params.columns() != data.input_dim() + 1)
    throw std::invalid_argument("normalization parameters do not match dataset columns");
  Eigen::MatrixXd x = data.inputs();
  Eigen::VectorXd y = data.targets();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = params.denormalize(static_cast<std::size_t>(j), x(i, j));
    y(i) = params.denormalize_target(y(i));
  }
  return Dataset(data.input_names(), data.target_name(), std::move(x), std::move(y), data.record_ids());
}

void write_norm_params(const std::filesystem::path& path, const NormParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "column,min,max,constant\n";
  for (std::size_t c = 0; c < params.columns(); ++c)
    out << params.names[c] << ',' << format_double(params.min[c]) << ',' << format_double(params.max[c]) << ','
        << (params.constant[c] ? 1 : 0) << '\n';
}

NormParams read_norm_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open normalization file: " + path.string());
  NormParams params;
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 4) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
    params.names.push_back(f[0]);
    params.min.push_back(parse_double(f[1]));
    params.max.push_back(parse_double(f[2]));
    params.constant.push_back(f[3] == "1");
  }
  if (params.columns() < 1) throw std::runtime_error(path.string() + ": no columns");
  return params;
}

Split split_even_odd(const Dataset& data, SplitParity parity) {
  if (data.empty()) throw std::invalid_argument("split_even_odd: empty dataset");
  std::vector<std::size_t> even, odd;  // by 1-based position
  for (std::size_t i = 0; i < data.size(); ++i) ((i + 1) % 2 == 0 ? even : odd).push_back(i);
  Split split;
  const bool train_even = parity == SplitParity::TrainEven;
  split.train = data.select(train_even ? even : odd);
  split.test = data.select(train_even ? odd : even);
  if (split.train.empty()) split.warnings.emplace_back("train split is empty");
  if (split.test.empty()) split.warnings.emplace_back("test split is empty");
  return split;
}

}  // namespace qsanfis
