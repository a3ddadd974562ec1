#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qsanfis {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Strict parse of a whole field; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split_fields(std::string_view line, char delimiter = ',');

/// Tracks files a command writes and deletes them again unless commit() is
/// reached, so a failed command leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory);
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  /// Registers and returns directory/name.
  std::filesystem::path add(const std::string& name);
  void commit() noexcept { committed_ = true; }
  const std::filesystem::path& directory() const noexcept { return directory_; }

 private:
  std::filesystem::path directory_;
  std::vector<std::filesystem::path> files_;
  bool created_directory_ = false;
  bool committed_ = false;
};

}  // namespace qsanfis
