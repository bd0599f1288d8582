#include "wavedesign/cli/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wavedesign/error.hpp"

namespace wavedesign::cli {

namespace fs = std::filesystem;

std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // -0.000000 after rounding is still zero
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  detail::require(columns_ > 0, "CSV header must be nonempty");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) { add_row({}, values); }

void CsvTable::add_row(const std::vector<std::string>& text, const std::vector<double>& values) {
  detail::require(text.size() + values.size() == columns_, "CSV row width mismatch");
  bool first = true;
  for (const auto& t : text) {
    if (!first) body_ += ',';
    body_ += t;
    first = false;
  }
  for (double v : values) {
    if (!first) body_ += ',';
    body_ += fmt6(v);
    first = false;
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return body_; }

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u16(std::string& s, std::uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>(v >> 8);
}

}  // namespace

std::string encode_wav_float32(const std::vector<double>& samples, unsigned sample_rate_hz) {
  detail::require(sample_rate_hz > 0, "WAV sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  std::string s;
  s.reserve(44 + data_bytes);
  s += "RIFF";
  put_u32(s, 36 + data_bytes);
  s += "WAVE";
  s += "fmt ";
  put_u32(s, 16);
  put_u16(s, 3);  // IEEE float
  put_u16(s, 1);
  put_u32(s, sample_rate_hz);
  put_u32(s, sample_rate_hz * 4);
  put_u16(s, 4);
  put_u16(s, 32);
  s += "data";
  put_u32(s, data_bytes);
  for (double v : samples) put_u32(s, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return s;
}

}  // namespace wavedesign::cli
