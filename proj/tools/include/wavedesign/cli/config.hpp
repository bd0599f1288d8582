#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavedesign/design.hpp"
#include "wavedesign/metrics.hpp"
#include "wavedesign/optimizer.hpp"
#include "wavedesign/scene.hpp"
#include "wavedesign/waveforms.hpp"

namespace wavedesign::cli {

using nlohmann::json;

/// Parsers throw InvalidInput on a missing or ill-typed field. Relative
/// file references resolve against `base_dir` (the config's directory).
WaveformSpec parse_waveform(const json& j, const std::filesystem::path& base_dir = {});
RegionSpec parse_region(const json& j, double bandwidth_hz, double duration_s);
RegionDesignConfig parse_design(const json& j);
EchoScene parse_scene(const json& j, double bandwidth_hz);
MtsfmParameters parse_coefficients(const json& j);

json to_json(const MtsfmParameters& p);
json to_json(const MetricsReport& m);
json to_json(const RegionSpec& r);
json to_json(const EchoDetection& d);

struct OutputOptions {
  std::filesystem::path dir = ".";
  bool csv = true;
  bool json = true;
  bool wav = false;
};

/// Reads {"dir", "formats": [...]} under "output".
OutputOptions parse_output(const json& config);
/// Accepts "csv,json,wav" style lists.
void apply_formats(OutputOptions& out, const std::string& list);

}  // namespace wavedesign::cli
