#include "wavedesign/cli/config.hpp"

#include <sstream>

#include "wavedesign/cli/io.hpp"
#include "wavedesign/error.hpp"

namespace wavedesign::cli {

namespace fs = std::filesystem;

namespace {

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T need(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return get<T>(j, key, T{});
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
}

}  // namespace

MtsfmParameters parse_coefficients(const json& j) {
  require_object(j, "coefficients");
  MtsfmParameters p(need<std::vector<double>>(j, "alpha"), need<std::vector<double>>(j, "beta"),
                    need<double>(j, "duration_s"));
  p.validate();
  return p;
}

WaveformSpec parse_waveform(const json& j, const fs::path& base_dir) {
  require_object(j, "waveform");
  WaveformSpec s;
  s.kind = waveform_kind_from_string(need<std::string>(j, "kind"));

  json coeffs;
  if (j.contains("coefficients_file")) {
    fs::path p = need<std::string>(j, "coefficients_file");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    coeffs = read_json(p);
  } else if (j.contains("coefficients")) {
    coeffs = j.at("coefficients");
  }
  if (!coeffs.is_null()) {
    s.mtsfm = parse_coefficients(coeffs);
    // a coefficient file carries the design's band and rate; the waveform block may override
    s.bandwidth_hz = get<double>(coeffs, "bandwidth_hz", s.bandwidth_hz);
    s.sample_rate_hz = get<double>(coeffs, "sample_rate_hz", s.sample_rate_hz);
    s.duration_s = s.mtsfm->duration_s;
  }

  s.bandwidth_hz = get<double>(j, "bandwidth_hz", s.bandwidth_hz);
  s.duration_s = get<double>(j, "duration_s", s.duration_s);
  s.sample_rate_hz = get<double>(j, "sample_rate_hz", s.sample_rate_hz);
  s.center_freq_hz = get<double>(j, "center_freq_hz", s.center_freq_hz);
  s.hfm_f1_hz = get<double>(j, "f1_hz", s.hfm_f1_hz);
  s.hfm_f2_hz = get<double>(j, "f2_hz", s.hfm_f2_hz);
  s.chips = get<std::size_t>(j, "chips", s.chips);
  s.comb_tones = get<std::size_t>(j, "comb_tones", s.comb_tones);
  s.comb_ratio = get<double>(j, "comb_ratio", s.comb_ratio);

  if (j.contains("costas")) {
    const auto& c = j.at("costas");
    require_object(c, "costas");
    if (c.contains("sequence")) {
      s.costas = CostasCode(need<std::vector<int>>(c, "sequence"));
    } else {
      s.costas = generate_welch_costas(need<std::int64_t>(c, "prime"), need<std::int64_t>(c, "root"));
    }
  }
  if (s.kind == WaveformKind::MTSFM && !s.mtsfm)
    throw InvalidInput("mtsfm waveform needs 'coefficients' or 'coefficients_file'");
  if (s.kind == WaveformKind::CostasFSK && !s.costas)
    throw InvalidInput("costas waveform needs a 'costas' block");
  s.validate();
  return s;
}

RegionSpec parse_region(const json& j, double bandwidth_hz, double duration_s) {
  RegionSpec r = default_region(bandwidth_hz, duration_s);
  if (!j.is_null()) {
    require_object(j, "region");
    r.inner_delay_s = get<double>(j, "inner_s", r.inner_delay_s);
    r.outer_delay_s = get<double>(j, "outer_s", r.outer_delay_s);
  }
  r.validate();
  return r;
}

RegionDesignConfig parse_design(const json& j) {
  RegionDesignConfig c;
  if (j.is_null()) return c;
  require_object(j, "problem");
  c.bandwidth_hz = get<double>(j, "bandwidth_hz", c.bandwidth_hz);
  c.duration_s = get<double>(j, "duration_s", c.duration_s);
  c.harmonics = get<std::size_t>(j, "harmonics", c.harmonics);
  c.oversample = get<double>(j, "oversample", c.oversample);
  c.taper = get<double>(j, "taper", c.taper);
  c.rms_target_hz = get<double>(j, "rms_target_hz", c.rms_target_hz);
  c.bandwidth_tolerance = get<double>(j, "bandwidth_tolerance", c.bandwidth_tolerance);
  c.penalty_weight = get<double>(j, "penalty_weight", c.penalty_weight);
  c.perturbation = get<double>(j, "perturbation", c.perturbation);
  c.objective = objective_kind_from_string(get<std::string>(j, "objective", to_string(c.objective)));
  c.budget = get<std::size_t>(j, "budget", c.budget);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.local_budget = get<std::size_t>(j, "local_budget", c.local_budget);
  c.hop_scales = get<std::vector<double>>(j, "hop_scales", c.hop_scales);
  return c;
}

EchoScene parse_scene(const json& j, double bandwidth_hz) {
  require_object(j, "scene");
  EchoScene s;
  const auto preset = get<std::string>(j, "preset", "");
  if (preset == "graded") {
    s = graded_echo_scene(bandwidth_hz);
  } else if (!preset.empty()) {
    throw InvalidInput("unknown scene preset '" + preset + "'");
  } else {
    const auto& list = j.contains("echoes") ? j.at("echoes") : json::array();
    if (!list.is_array()) throw InvalidInput("'echoes' must be an array");
    for (const auto& e : list) {
      require_object(e, "echo");
      s.echoes.push_back({need<double>(e, "delay_s"), get<double>(e, "doppler_hz", 0.0),
                          get<double>(e, "level_db", 0.0), get<double>(e, "time_scale", 1.0)});
    }
  }
  if (j.contains("noise_level_db") && !j.at("noise_level_db").is_null())
    s.noise_level_db = need<double>(j, "noise_level_db");
  s.window_s = get<double>(j, "window_s", s.window_s);
  s.validate();
  return s;
}

json to_json(const MtsfmParameters& p) {
  return {{"harmonics", p.num_harmonics()},
          {"duration_s", p.duration_s},
          {"alpha", p.alpha},
          {"beta", p.beta}};
}

json to_json(const MetricsReport& m) {
  return {{"psl_db", m.psl_db},
          {"isl_db", m.isl_db},
          {"inband_energy_fraction", m.inband_energy_fraction},
          {"rms_bandwidth_hz", m.rms_bandwidth_hz},
          {"p99_bandwidth_hz", m.p99_bandwidth_hz},
          {"tbp", m.tbp},
          {"bandwidth_hz", m.bandwidth_hz}};
}

json to_json(const RegionSpec& r) {
  return {{"inner_s", r.inner_delay_s}, {"outer_s", r.outer_delay_s}};
}

json to_json(const EchoDetection& d) {
  return {{"detected", d.detected},
          {"measured_level_db", d.measured_level_db},
          {"measured_delay_s", d.measured_delay_s},
          {"position_error_s", d.position_error_s},
          {"background_db", d.background_db}};
}

OutputOptions parse_output(const json& config) {
  OutputOptions o;
  if (!config.contains("output")) return o;
  const auto& j = config.at("output");
  require_object(j, "output");
  o.dir = get<std::string>(j, "dir", o.dir.string());
  if (j.contains("formats")) {
    const auto list = need<std::vector<std::string>>(j, "formats");
    std::string joined;
    for (const auto& f : list) joined += (joined.empty() ? "" : ",") + f;
    apply_formats(o, joined);
  }
  return o;
}

void apply_formats(OutputOptions& out, const std::string& list) {
  out.csv = out.json = out.wav = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") out.csv = true;
    else if (item == "json") out.json = true;
    else if (item == "wav") out.wav = true;
    else throw InvalidInput("unknown output format '" + item + "'");
  }
  if (!out.csv && !out.json && !out.wav) throw InvalidInput("no output formats selected");
}

}  // namespace wavedesign::cli
