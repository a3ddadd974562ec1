#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsanfis {

struct Sample {
  std::vector<double> inputs;
  double target = 0.0;
};

/// Tabular regression data: one row per record, inputs in columns.
///
/// Every record keeps the 1-based data-row number it had in its source file,
/// which serves as its identity across filtering and splitting.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> input_names, std::string target_name, Eigen::MatrixXd inputs,
          Eigen::VectorXd targets, std::vector<std::size_t> record_ids);

  std::size_t size() const noexcept { return static_cast<std::size_t>(targets_.size()); }
  bool empty() const noexcept { return size() == 0; }
  std::size_t input_dim() const noexcept { return input_names_.size(); }

  const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
  const Eigen::VectorXd& targets() const noexcept { return targets_; }
  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::string& target_name() const noexcept { return target_name_; }
  const std::vector<std::size_t>& record_ids() const noexcept { return record_ids_; }

  Sample sample(std::size_t i) const;
  /// Subset in the given row order.
  Dataset select(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<std::string> input_names_;
  std::string target_name_;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  std::vector<std::size_t> record_ids_;
};

/// Raw per-column range; inputs first (in input order), then the target.
struct NormParams {
  std::vector<std::string> names;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<bool> constant;

  std::size_t columns() const noexcept { return names.size(); }
  double normalize(std::size_t column, double raw) const;
  double denormalize(std::size_t column, double normalized) const;
  double denormalize_target(double normalized) const { return denormalize(columns() - 1, normalized); }
};

/// Loads a CSV with a header row. Records with the missing token in any
/// selected column are dropped. `input_columns` empty means every column other
/// than the target; unselected columns are not parsed.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 const std::string& missing_token = "?", const std::vector<std::string>& input_columns = {});

/// Input columns only, for prediction. Unlike load_csv an empty result is
/// allowed; the returned targets are zero.
Dataset load_inputs_csv(const std::filesystem::path& path, const std::vector<std::string>& input_columns,
                        const std::string& missing_token = "?");

/// Writes inputs then target, same layout load_csv reads.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

std::pair<Dataset, NormParams> normalize_minmax(const Dataset& data);
/// Applies previously computed ranges (e.g. to new raw data at predict time).
Dataset apply_normalization(const Dataset& data, const NormParams& params);
Dataset denormalize(const Dataset& data, const NormParams& params);

void write_norm_params(const std::filesystem::path& path, const NormParams& params);
NormParams read_norm_params(const std::filesystem::path& path);

enum class SplitParity {
  TrainEven,  ///< 1-based positions 2,4,... train; 1,3,... test
  TrainOdd,
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::string> warnings;
};

Split split_even_odd(const Dataset& data, SplitParity parity = SplitParity::TrainEven);

}  // namespace qsanfis
