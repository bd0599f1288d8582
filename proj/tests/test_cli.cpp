#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wavedesign/cli/config.hpp"
#include "wavedesign/cli/io.hpp"
#include "wavedesign/error.hpp"

using namespace wavedesign;
using namespace wavedesign::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kRuns = WAVEDESIGN_RUN_DIR;

fs::path write_config(const std::string& name, const json& j) {
  fs::create_directories(kRuns / "configs");
  const auto p = kRuns / "configs" / (name + ".json");
  std::ofstream(p) << j.dump(2);
  return p;
}

int tool(const std::string& args) {
  const std::string cmd = std::string(WAVEDESIGN_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_config(const std::string& command, const std::string& name, const json& cfg,
               const std::string& extra = "") {
  const auto p = write_config(name, cfg);
  return tool(command + " --config " + p.string() + " --out " + (kRuns / name).string() + " " + extra);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

json lfm_waveform() { return {{"kind", "lfm"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 2048}}; }
json costas_waveform() {
  return {{"kind", "costas"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 2048},
          {"costas", {{"prime", 17}, {"root", 3}}}};
}

json small_optimize() {
  return {{"command", "optimize"},
          {"problem", {{"bandwidth_hz", 64}, {"harmonics", 8}, {"budget", 400}, {"local_budget", 150}, {"seed", 3}}}};
}

}  // namespace

TEST(Cli, SynthCwWritesSamplesMetricsAndWav) {
  const json cfg = {{"command", "synth"},
                    {"waveform", {{"kind", "cw"}, {"bandwidth_hz", 10}, {"duration_s", 1}, {"sample_rate_hz", 1000}, {"center_freq_hz", 100}}}};
  ASSERT_EQ(run_config("synth", "synth_cw", cfg, "--format csv,json,wav"), 0);
  const auto rows = read_csv(kRuns / "synth_cw" / "waveform.csv");
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"index", "t_s", "re", "im"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0.000000", "1.000000", "0.000000"}));
  EXPECT_EQ(rows[1000][0], "999");

  const auto m = read_json(kRuns / "synth_cw" / "metrics.json");
  for (const char* k : {"psl_db", "isl_db", "inband_energy_fraction", "rms_bandwidth_hz", "p99_bandwidth_hz", "tbp"})
    EXPECT_TRUE(m.at("metrics").contains(k)) << k;
  EXPECT_EQ(m.at("waveform").at("samples"), 1000);
  EXPECT_NEAR(m.at("waveform").at("energy").get<double>(), 1.0, 1e-12);

  const auto wav = read_file(kRuns / "synth_cw" / "waveform.wav");
  ASSERT_EQ(wav.size(), 44u + 4 * 1000);
  EXPECT_EQ(wav.substr(0, 4), "RIFF");
  EXPECT_EQ(wav.substr(8, 8), "WAVEfmt ");
  EXPECT_EQ(static_cast<unsigned char>(wav[20]), 3);  // IEEE float
  EXPECT_EQ(static_cast<unsigned char>(wav[22]), 1);  // mono
  EXPECT_EQ(static_cast<unsigned char>(wav[34]), 32);
  EXPECT_EQ(wav.substr(36, 4), "data");
  float first;
  std::memcpy(&first, wav.data() + 44, 4);
  EXPECT_FLOAT_EQ(first, 1.0f);  // Re{s(0) e^{0}}
}

TEST(Cli, AnalyzeBundle) {
  const json cfg = {{"command", "analyze"}, {"waveform", {{"kind", "cw"}, {"bandwidth_hz", 16}, {"duration_s", 1}, {"sample_rate_hz", 256}}},
                    {"analysis", {{"af_delay_points", 33}, {"af_doppler_points", 17}}}};
  ASSERT_EQ(run_config("analyze", "analyze_cw", cfg), 0);
  const auto dir = kRuns / "analyze_cw";
  for (const char* f : {"spectrogram.csv", "spectrum.csv", "autocorrelation.csv", "ambiguity.csv", "metrics.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  const auto sp = read_csv(dir / "spectrum.csv");
  EXPECT_EQ(sp[0], (std::vector<std::string>{"f_hz", "db"}));
  std::size_t best = 1;
  for (std::size_t i = 1; i < sp.size(); ++i)
    if (std::stod(sp[i][1]) > std::stod(sp[best][1])) best = i;
  EXPECT_EQ(sp[best][0], "0.000000");

  const auto ac = read_csv(dir / "autocorrelation.csv");
  for (std::size_t i = 1; i < ac.size(); ++i)
    if (ac[i][0] == "0") {
      EXPECT_EQ(ac[i][2], "0.000000");
    }

  const auto af = read_csv(dir / "ambiguity.csv");
  ASSERT_EQ(af.size(), 1u + 33 * 17);
  std::map<std::pair<std::string, std::string>, double> grid;
  for (std::size_t i = 1; i < af.size(); ++i) grid[{af[i][0], af[i][1]}] = std::stod(af[i][2]);
  auto neg = [](const std::string& s) { return s == "0.000000" ? s : (s[0] == '-' ? s.substr(1) : "-" + s); };
  for (const auto& [k, v] : grid) {
    auto it = grid.find({neg(k.first), neg(k.second)});
    ASSERT_NE(it, grid.end()) << k.first << " " << k.second;
    EXPECT_NEAR(it->second, v, 1e-6);
  }
}

TEST(Cli, OptimizeIsDeterministicAndImproves) {
  ASSERT_EQ(run_config("optimize", "opt_a", small_optimize()), 0);
  ASSERT_EQ(run_config("optimize", "opt_b", small_optimize()), 0);
  for (const char* f : {"trace.csv", "metrics.json", "coefficients.json", "analysis/metrics.json", "analysis/autocorrelation.csv"})
    EXPECT_EQ(read_file(kRuns / "opt_a" / f), read_file(kRuns / "opt_b" / f)) << f;
  const auto m = read_json(kRuns / "opt_a" / "metrics.json");
  EXPECT_LT(m.at("final").at("isl_db").get<double>(), m.at("initial").at("isl_db").get<double>());
  EXPECT_LE(m.at("final_objective_db").get<double>(), m.at("initial_objective_db").get<double>());
  EXPECT_TRUE(m.at("converged").is_boolean());

  // a different seed is a different run
  ASSERT_EQ(run_config("optimize", "opt_c", small_optimize(), "--seed 11"), 0);
  EXPECT_NE(read_file(kRuns / "opt_a" / "coefficients.json"), read_file(kRuns / "opt_c" / "coefficients.json"));
  EXPECT_EQ(read_json(kRuns / "opt_c" / "metrics.json").at("seed"), 11);
}

TEST(Cli, CoefficientsRoundTripThroughAnalyze) {
  ASSERT_EQ(run_config("optimize", "opt_rt", small_optimize()), 0);
  const json cfg = {{"command", "analyze"},
                    {"waveform", {{"kind", "mtsfm"}, {"coefficients_file", (kRuns / "opt_rt" / "coefficients.json").string()}}}};
  ASSERT_EQ(run_config("analyze", "analyze_rt", cfg), 0);
  const auto a = read_json(kRuns / "opt_rt" / "analysis" / "metrics.json").at("metrics");
  const auto b = read_json(kRuns / "analyze_rt" / "metrics.json").at("metrics");
  for (auto it = a.begin(); it != a.end(); ++it)
    EXPECT_NEAR(it.value().get<double>(), b.at(it.key()).get<double>(), 1e-12) << it.key();
  const auto c = parse_coefficients(read_json(kRuns / "opt_rt" / "coefficients.json"));
  const auto j = to_json(c);
  EXPECT_EQ(j.at("alpha"), read_json(kRuns / "opt_rt" / "coefficients.json").at("alpha"));
}

TEST(Cli, SimulateCostasSceneAndReruns) {
  const json cfg = {{"command", "simulate"}, {"waveform", costas_waveform()},
                    {"scene", {{"preset", "graded"}, {"noise_level_db", -60}}}, {"dopplers_hz", {-16, 0, 16}}, {"seed", 4}};
  ASSERT_EQ(run_config("simulate", "sim_a", cfg), 0);
  ASSERT_EQ(run_config("simulate", "sim_b", cfg), 0);
  for (const char* f : {"range_doppler.csv", "zero_doppler.csv", "resolvability.json"})
    EXPECT_EQ(read_file(kRuns / "sim_a" / f), read_file(kRuns / "sim_b" / f)) << f;
  const auto r = read_json(kRuns / "sim_a" / "resolvability.json");
  ASSERT_EQ(r.at("echoes").size(), 6u);
  EXPECT_GE(r.at("undetected").get<int>(), 1);
  EXPECT_FALSE(r.at("all_detected").get<bool>());
  EXPECT_EQ(read_csv(kRuns / "sim_a" / "range_doppler.csv").size(), 1u + 3 * (2048 + (2048 + 320) - 1));
}

TEST(Cli, SimulateRejectsEmptyDopplerGrid) {
  const json cfg = {{"command", "simulate"}, {"waveform", lfm_waveform()}, {"scene", {{"preset", "graded"}}}, {"dopplers_hz", json::array()}};
  EXPECT_EQ(run_config("simulate", "sim_empty", cfg), 2);
}

TEST(Cli, CompareTablesAndOrderings) {
  const json cfg = {
      {"command", "compare"},
      {"waveforms", {{{"name", "CW"}, {"kind", "cw"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 2048}},
                     {{"name", "P4"}, {"kind", "p4"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 2048}, {"chips", 256}},
                     {{"name", "Costas"}, {"kind", "costas"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 2048}, {"costas", {{"prime", 17}, {"root", 3}}}}}},
      {"doppler", {{"dopplers_hz", {0, 25.6}}}}};
  ASSERT_EQ(run_config("compare", "compare", cfg), 0);
  const auto rows = read_csv(kRuns / "compare" / "compare.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "name");
  EXPECT_EQ(rows[2][1], "p4");
  const auto d = read_csv(kRuns / "compare" / "doppler.csv");
  EXPECT_EQ(d.size(), 1u + 3 * 2);
  const auto j = read_json(kRuns / "compare" / "compare.json");
  ASSERT_EQ(j.at("waveforms").size(), 3u);
  EXPECT_EQ(j.at("waveforms")[0].at("doppler_tolerance")[0].at("peak_loss_db"), 0.0);
}

TEST(Cli, CompareRejectsMixedRates) {
  json a = lfm_waveform(), b = lfm_waveform();
  b["sample_rate_hz"] = 1024;
  const json cfg = {{"command", "compare"}, {"waveforms", {a, b}}};
  EXPECT_EQ(run_config("compare", "compare_mixed", cfg), 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(tool("synth --config " + (kRuns / "configs" / "missing.json").string()), 3);
  fs::create_directories(kRuns / "configs");
  std::ofstream(kRuns / "configs" / "broken.json") << "{ not json";
  EXPECT_EQ(tool("synth --config " + (kRuns / "configs" / "broken.json").string()), 2);
  EXPECT_EQ(run_config("synth", "bad_kind", {{"waveform", {{"kind", "chirp"}}}}), 2);
  EXPECT_EQ(run_config("analyze", "wrong_cmd", {{"command", "synth"}, {"waveform", lfm_waveform()}}), 2);
  EXPECT_EQ(run_config("synth", "bad_fs", {{"waveform", {{"kind", "lfm"}, {"bandwidth_hz", 256}, {"duration_s", 1}, {"sample_rate_hz", 100}}}}), 2);
  EXPECT_EQ(tool("synth"), 2);
  // output directory blocked by a regular file
  std::ofstream(kRuns / "blocker") << "x";
  const auto blocked = write_config("blocked", {{"waveform", lfm_waveform()}});
  EXPECT_EQ(tool("synth --config " + blocked.string() + " --out " + (kRuns / "blocker" / "sub").string()), 3);
  // non-convergence is reported, not fatal
  json quick = small_optimize();
  quick["problem"]["budget"] = 20;
  quick["problem"]["local_budget"] = 10;
  EXPECT_EQ(run_config("optimize", "opt_short", quick), 0);
  EXPECT_FALSE(read_json(kRuns / "opt_short" / "metrics.json").at("converged").get<bool>());
}

TEST(CliConfig, ParsersAndFormats) {
  const auto s = parse_waveform(costas_waveform());
  EXPECT_EQ(s.kind, WaveformKind::CostasFSK);
  ASSERT_TRUE(s.costas.has_value());
  EXPECT_EQ(s.costas->order(), 16);
  EXPECT_THROW(parse_waveform({{"kind", "lfm"}, {"bandwidth_hz", "wide"}}), InvalidInput);
  EXPECT_THROW(parse_waveform({{"kind", "mtsfm"}}), InvalidInput);
  const auto r = parse_region(json(nullptr), 256, 1);
  EXPECT_DOUBLE_EQ(r.inner_delay_s, 2.0 / 256);
  const auto d = parse_design({{"objective", "psl"}, {"budget", 100}, {"hop_scales", {0.5}}});
  EXPECT_EQ(d.objective, ObjectiveKind::PSL);
  EXPECT_EQ(d.budget, 100u);
  const auto sc = parse_scene({{"echoes", {{{"delay_s", 0.1}, {"level_db", 0}}, {{"delay_s", 0.2}, {"level_db", -6}, {"doppler_hz", 3}}}}}, 256);
  ASSERT_EQ(sc.echoes.size(), 2u);
  EXPECT_EQ(sc.echoes[1].doppler_hz, 3.0);
  EXPECT_THROW(parse_scene({{"preset", "nope"}}, 256), InvalidInput);

  OutputOptions o;
  apply_formats(o, "wav");
  EXPECT_TRUE(o.wav);
  EXPECT_FALSE(o.csv);
  EXPECT_FALSE(o.json);
  EXPECT_THROW(apply_formats(o, "csv,png"), InvalidInput);
}

TEST(CliIo, FormattingAndCsv) {
  EXPECT_EQ(fmt6(-0.0), "0.000000");
  EXPECT_EQ(fmt6(-1e-9), "0.000000");
  EXPECT_EQ(fmt6(1.5), "1.500000");
  CsvTable t({"a", "b"});
  t.add_row({1.0, 2.0});
  t.add_row({"x"}, {3.0});
  EXPECT_EQ(t.str(), "a,b\n1.000000,2.000000\nx,3.000000\n");
  EXPECT_THROW(t.add_row({1.0}), InvalidInput);
}
