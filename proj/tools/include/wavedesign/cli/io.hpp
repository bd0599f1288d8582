#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavedesign::cli {

/// Fixed six-decimal formatting used for every CSV cell.
std::string fmt6(double v);

/// Comma-separated table with a single header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  /// Mixed row: pre-formatted leading text cells then numbers.
  void add_row(const std::vector<std::string>& text, const std::vector<double>& values);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string body_;
};

/// Writes through a sibling temporary and renames it into place. Throws
/// IoError naming the path on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Mono RIFF/WAVE, format tag 3 (IEEE float), 32-bit little-endian.
std::string encode_wav_float32(const std::vector<double>& samples, unsigned sample_rate_hz);

}  // namespace wavedesign::cli
