#include "qsanfis/text_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace qsanfis {

std::string format_double(double value) {
  if (value == 0.0) return std::signbit(value) ? "-0" : "0";
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    fields.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

OutputSet::OutputSet(std::filesystem::path directory) : directory_(std::move(directory)) {
  if (!std::filesystem::exists(directory_)) {
    std::filesystem::create_directories(directory_);
    created_directory_ = true;
  }
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& file : files_) std::filesystem::remove(file, ec);
  if (created_directory_ && std::filesystem::is_empty(directory_, ec)) std::filesystem::remove(directory_, ec);
}

std::filesystem::path OutputSet::add(const std::string& name) {
  auto path = directory_ / name;
  files_.push_back(path);
  return path;
}

}  // namespace qsanfis
