#include "wavedesign/cli/commands.hpp"

#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "wavedesign/cli/io.hpp"
#include "wavedesign/error.hpp"

namespace wavedesign::cli {

namespace fs = std::filesystem;

namespace {

const json& section(const json& config, const char* key) {
  static const json null_json;
  return config.contains(key) ? config.at(key) : null_json;
}

const json& required_section(const json& config, const char* key) {
  if (!config.contains(key)) throw InvalidInput(std::string("config is missing '") + key + "'");
  return config.at(key);
}

double analysis_get(const json& a, const char* key, double fallback) {
  if (a.is_null() || !a.contains(key)) return fallback;
  if (!a.at(key).is_number()) throw InvalidInput(std::string("analysis field '") + key + "' must be a number");
  return a.at(key).get<double>();
}

json waveform_summary(const SampledSignal& s, const WaveformSpec& spec) {
  json j = {{"kind", to_string(spec.kind)},
            {"bandwidth_hz", spec.bandwidth_hz},
            {"duration_s", s.duration_s()},
            {"sample_rate_hz", s.sample_rate_hz()},
            {"center_freq_hz", s.center_freq_hz()},
            {"samples", s.size()},
            {"constant_modulus", s.constant_modulus()},
            {"energy", s.energy()}};
  if (spec.mtsfm) j["swept_bandwidth_hz"] = swept_bandwidth(*spec.mtsfm);
  return j;
}

struct Loaded {
  WaveformSpec spec;
  SampledSignal signal;
};

Loaded load_waveform(const CommandContext& ctx) {
  auto spec = parse_waveform(required_section(ctx.config, "waveform"), ctx.base_dir);
  auto sig = synthesize(spec);
  return {std::move(spec), std::move(sig)};
}

std::string waveform_csv(const SampledSignal& s) {
  CsvTable t({"index", "t_s", "re", "im"});
  const double dt = s.sample_period_s();
  for (std::size_t n = 0; n < s.size(); ++n)
    t.add_row({std::to_string(n)},
              {static_cast<double>(n) * dt, s.samples()[n].real(), s.samples()[n].imag()});
  return t.str();
}

void emit(Written& w, const fs::path& p, const std::string& bytes) {
  write_file_atomic(p, bytes);
  w.push_back(p);
}

void emit_json(Written& w, const fs::path& p, const json& doc) {
  write_json(p, doc);
  w.push_back(p);
}

/// Spectrogram, spectrum, autocorrelation, ambiguity and metrics for one waveform.
void write_analysis(Written& w, const fs::path& dir, const OutputOptions& out,
                    const SampledSignal& s, const WaveformSpec& spec, const RegionSpec& region,
                    const json& a) {
  const double T = s.duration_s();
  const double B = spec.bandwidth_hz;
  const auto zero_pad = static_cast<std::size_t>(analysis_get(a, "spectrum_zero_pad", 4));
  const auto metrics = compute_metrics(s, region, B, zero_pad);

  if (out.csv) {
    const auto win = static_cast<std::size_t>(
        analysis_get(a, "spectrogram_window", static_cast<double>(std::min<std::size_t>(128, s.size()))));
    const auto sg = spectrogram(s, win, analysis_get(a, "spectrogram_overlap", 0.75));
    CsvTable sgt({"t_s", "f_hz", "db"});
    for (std::size_t i = 0; i < sg.times_s.size(); ++i)
      for (std::size_t k = 0; k < sg.freqs_hz.size(); ++k)
        sgt.add_row({sg.times_s[i], sg.freqs_hz[k], sg.magnitude_db[i][k]});
    emit(w, dir / "spectrogram.csv", sgt.str());

    const auto sp = spectrum(s, zero_pad);
    double peak = 0.0;
    for (double m : sp.magnitude) peak = std::max(peak, m);
    CsvTable spt({"f_hz", "db"});
    for (std::size_t k = 0; k < sp.freqs_hz.size(); ++k)
      spt.add_row({sp.freqs_hz[k], amplitude_db(sp.magnitude[k], peak)});
    emit(w, dir / "spectrum.csv", spt.str());

    const auto ac = autocorrelation(s);
    CsvTable act({"lag_index", "lag_s", "db"});
    for (std::size_t i = 0; i < ac.lags_s.size(); ++i)
      act.add_row({std::to_string(static_cast<long>(i) - static_cast<long>(ac.zero_index))},
                  {ac.lags_s[i], ac.magnitude_db[i]});
    emit(w, dir / "autocorrelation.csv", act.str());

    const auto af = ambiguity_function(
        s, analysis_get(a, "af_max_delay_s", T / 4.0), analysis_get(a, "af_max_doppler_hz", B / 4.0),
        static_cast<std::size_t>(analysis_get(a, "af_delay_points", 257)),
        static_cast<std::size_t>(analysis_get(a, "af_doppler_points", 65)));
    CsvTable aft({"tau_s", "nu_hz", "db"});
    for (std::size_t q = 0; q < af.dopplers_hz.size(); ++q)
      for (std::size_t p = 0; p < af.delays_s.size(); ++p)
        aft.add_row({af.delays_s[p], af.dopplers_hz[q], amplitude_db(af.magnitude[q][p])});
    emit(w, dir / "ambiguity.csv", aft.str());
  }
  if (out.json) {
    json doc = {{"waveform", waveform_summary(s, spec)},
                {"region", to_json(region)},
                {"metrics", to_json(metrics)}};
    emit_json(w, dir / "metrics.json", doc);
  }
}

DopplerModel doppler_model_from_string(const std::string& name) {
  if (name == "narrowband") return DopplerModel::Narrowband;
  if (name == "wideband") return DopplerModel::Wideband;
  throw InvalidInput("unknown Doppler model '" + name + "'");
}

}  // namespace

Written cmd_synth(const CommandContext& ctx) {
  const auto [spec, sig] = load_waveform(ctx);
  const auto region = parse_region(section(ctx.config, "region"), spec.bandwidth_hz, sig.duration_s());
  Written w;
  const auto& dir = ctx.output.dir;
  if (ctx.output.csv) emit(w, dir / "waveform.csv", waveform_csv(sig));
  if (ctx.output.json) {
    json doc = {{"waveform", waveform_summary(sig, spec)},
                {"region", to_json(region)},
                {"metrics", to_json(compute_metrics(sig, region, spec.bandwidth_hz))}};
    emit_json(w, dir / "metrics.json", doc);
  }
  if (ctx.output.wav) {
    const double fs = sig.sample_rate_hz();
    if (fs != std::round(fs) || fs > 4.0e9)
      throw InvalidInput("WAV export needs an integral sample rate");
    emit(w, dir / "waveform.wav", encode_wav_float32(to_passband(sig), static_cast<unsigned>(fs)));
  }
  return w;
}

Written cmd_analyze(const CommandContext& ctx) {
  const auto [spec, sig] = load_waveform(ctx);
  const auto region = parse_region(section(ctx.config, "region"), spec.bandwidth_hz, sig.duration_s());
  Written w;
  write_analysis(w, ctx.output.dir, ctx.output, sig, spec, region, section(ctx.config, "analysis"));
  return w;
}

Written cmd_optimize(const CommandContext& ctx) {
  auto design = parse_design(section(ctx.config, "problem"));
  if (ctx.seed) design.seed = *ctx.seed;
  const std::string method = section(ctx.config, "problem").value("method", std::string("design"));
  auto problem = make_region_design_problem(design);
  if (ctx.config.contains("region"))
    problem.region = parse_region(ctx.config.at("region"), design.bandwidth_hz, design.duration_s);

  OptimizationResult r;
  if (method == "design") {
    if (ctx.config.contains("region")) throw InvalidInput("method 'design' uses the default region");
    r = design_region_mtsfm(design);
  } else if (method == "gradient_descent") {
    r = minimize_gradient_descent(problem);
  } else if (method == "nelder_mead") {
    r = minimize_nelder_mead(problem);
  } else {
    throw InvalidInput("unknown optimization method '" + method + "'");
  }

  const double fs = problem.sample_rate_hz;
  const auto before = synth_mtsfm(problem.initial, fs);
  const auto after = synth_mtsfm(r.final, fs);
  const double B = design.bandwidth_hz;

  Written w;
  const auto& dir = ctx.output.dir;
  if (ctx.output.json) {
    json coeffs = to_json(r.final);
    coeffs["bandwidth_hz"] = B;
    coeffs["sample_rate_hz"] = fs;
    emit_json(w, dir / "coefficients.json", coeffs);

    json doc = {{"method", method},
                {"seed", design.seed},
                {"objective", to_string(problem.objective)},
                {"converged", r.converged},
                {"evaluations_used", r.evaluations_used},
                {"budget", problem.budget},
                {"initial_objective_db", r.initial_objective_db},
                {"final_objective_db", r.final_objective_db},
                {"bandwidth_target_hz", problem.bandwidth_target_hz},
                {"bandwidth_tolerance", problem.bandwidth_tolerance},
                {"final_rms_bandwidth_hz", r.final_rms_bandwidth_hz},
                {"swept_bandwidth_hz", swept_bandwidth(r.final)},
                {"region", to_json(problem.region)},
                {"initial", to_json(compute_metrics(before, problem.region, B))},
                {"final", to_json(compute_metrics(after, problem.region, B))}};
    emit_json(w, dir / "metrics.json", doc);
  }
  if (ctx.output.csv) {
    CsvTable t({"evaluation", "objective", "objective_db"});
    for (const auto& tp : r.trace)
      t.add_row({std::to_string(tp.evaluation)},
                {tp.objective, objective_db(tp.objective, problem.objective)});
    emit(w, dir / "trace.csv", t.str());
  }
  WaveformSpec spec;
  spec.kind = WaveformKind::MTSFM;
  spec.bandwidth_hz = B;
  spec.duration_s = design.duration_s;
  spec.sample_rate_hz = fs;
  spec.mtsfm = r.final;
  write_analysis(w, dir / "analysis", ctx.output, after, spec, problem.region,
                 section(ctx.config, "analysis"));
  return w;
}

Written cmd_simulate(const CommandContext& ctx) {
  const auto [spec, sig] = load_waveform(ctx);
  const auto scene = parse_scene(required_section(ctx.config, "scene"), spec.bandwidth_hz);
  std::vector<double> dopplers = {0.0};
  if (ctx.config.contains("dopplers_hz")) {
    const auto& d = ctx.config.at("dopplers_hz");
    if (!d.is_array()) throw InvalidInput("'dopplers_hz' must be an array");
    dopplers = d.get<std::vector<double>>();
  }
  if (dopplers.empty()) throw InvalidInput("Doppler grid must be nonempty");
  const std::uint64_t seed = ctx.seed.value_or(ctx.config.value("seed", std::uint64_t{0}));
  ResolvabilityOptions ropt;
  ropt.margin_db = ctx.config.value("margin_db", ropt.margin_db);

  const auto rx = simulate_returns(sig, scene, seed);
  const auto map = mf_bank(rx, sig, dopplers);
  const auto report = resolvability_report(map, scene, spec.bandwidth_hz, ropt);

  std::size_t zero_row = 0;
  for (std::size_t r = 1; r < dopplers.size(); ++r)
    if (std::abs(dopplers[r]) < std::abs(dopplers[zero_row])) zero_row = r;

  Written w;
  const auto& dir = ctx.output.dir;
  if (ctx.output.csv) {
    CsvTable rd({"delay_s", "doppler_hz", "db"});
    for (std::size_t r = 0; r < dopplers.size(); ++r)
      for (std::size_t i = 0; i < map.delays_s.size(); ++i)
        rd.add_row({map.delays_s[i], dopplers[r], map.magnitude_db[r][i]});
    emit(w, dir / "range_doppler.csv", rd.str());
    CsvTable cut({"delay_s", "db"});
    for (std::size_t i = 0; i < map.delays_s.size(); ++i)
      cut.add_row({map.delays_s[i], map.magnitude_db[zero_row][i]});
    emit(w, dir / "zero_doppler.csv", cut.str());
  }
  if (ctx.output.json) {
    json echoes = json::array();
    std::size_t missed = 0;
    for (std::size_t i = 0; i < report.size(); ++i) {
      json e = to_json(report[i]);
      e["delay_s"] = scene.echoes[i].delay_s;
      e["doppler_hz"] = scene.echoes[i].doppler_hz;
      e["level_db"] = scene.echoes[i].level_db;
      if (!report[i].detected) ++missed;
      echoes.push_back(std::move(e));
    }
    json doc = {{"waveform", waveform_summary(sig, spec)},
                {"margin_db", ropt.margin_db},
                {"seed", seed},
                {"all_detected", missed == 0},
                {"undetected", missed},
                {"echoes", std::move(echoes)}};
    emit_json(w, dir / "resolvability.json", doc);
  }
  return w;
}

Written cmd_compare(const CommandContext& ctx) {
  const auto& list = required_section(ctx.config, "waveforms");
  if (!list.is_array() || list.empty()) throw InvalidInput("'waveforms' must be a nonempty array");

  struct Entry {
    std::string name;
    WaveformSpec spec;
    SampledSignal signal;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto spec = parse_waveform(list[i], ctx.base_dir);
    std::string name = list[i].value("name", std::string(to_string(spec.kind)));
    if (name.find_first_of(",\"\n") != std::string::npos)
      throw InvalidInput("waveform name '" + name + "' must not contain commas or quotes");
    auto sig = synthesize(spec);
    if (!entries.empty() && sig.sample_rate_hz() != entries.front().signal.sample_rate_hz())
      throw InvalidInput("compared waveforms must share one sample rate");
    entries.push_back({std::move(name), std::move(spec), std::move(sig)});
  }
  const auto& first = entries.front();
  const double B = ctx.config.value("bandwidth_hz", first.spec.bandwidth_hz);
  const auto region = parse_region(section(ctx.config, "region"), B, first.signal.duration_s());

  std::vector<double> dopplers;
  DopplerModel model = DopplerModel::Narrowband;
  if (ctx.config.contains("doppler")) {
    const auto& d = ctx.config.at("doppler");
    if (!d.is_object()) throw InvalidInput("'doppler' must be an object");
    model = doppler_model_from_string(d.value("model", std::string("narrowband")));
    if (d.contains("dopplers_hz")) {
      dopplers = d.at("dopplers_hz").get<std::vector<double>>();
    } else {
      const double vmax = d.value("max_hz", 0.1 * B);
      const auto pts = d.value("points", std::size_t{11});
      if (pts < 2 || !(vmax > 0.0)) throw InvalidInput("Doppler sweep needs max_hz > 0 and points >= 2");
      for (std::size_t i = 0; i < pts; ++i)
        dopplers.push_back(-vmax + 2.0 * vmax * static_cast<double>(i) / static_cast<double>(pts - 1));
    }
  }

  Written w;
  const auto& dir = ctx.output.dir;
  CsvTable table({"name", "kind", "psl_db", "isl_db", "p99_bandwidth_hz", "inband_energy_fraction",
                  "rms_bandwidth_hz"});
  CsvTable dtab({"name", "doppler_hz", "peak_loss_db", "peak_shift_s"});
  json rows = json::array();
  for (const auto& e : entries) {
    const auto m = compute_metrics(e.signal, region, B);
    table.add_row({e.name, to_string(e.spec.kind)},
                  {m.psl_db, m.isl_db, m.p99_bandwidth_hz, m.inband_energy_fraction, m.rms_bandwidth_hz});
    json row = {{"name", e.name}, {"waveform", waveform_summary(e.signal, e.spec)}, {"metrics", to_json(m)}};
    if (!dopplers.empty()) {
      json curve = json::array();
      for (const auto& p : doppler_tolerance_curve(e.signal, dopplers, model)) {
        dtab.add_row({e.name}, {p.doppler_hz, p.peak_loss_db, p.peak_shift_s});
        curve.push_back({{"doppler_hz", p.doppler_hz},
                         {"peak_loss_db", p.peak_loss_db},
                         {"peak_shift_s", p.peak_shift_s}});
      }
      row["doppler_tolerance"] = std::move(curve);
    }
    rows.push_back(std::move(row));
  }
  if (ctx.output.csv) {
    emit(w, dir / "compare.csv", table.str());
    if (!dopplers.empty()) emit(w, dir / "doppler.csv", dtab.str());
  }
  if (ctx.output.json) {
    json doc = {{"bandwidth_hz", B},
                {"region", to_json(region)},
                {"doppler_model", model == DopplerModel::Wideband ? "wideband" : "narrowband"},
                {"waveforms", std::move(rows)}};
    emit_json(w, dir / "compare.json", doc);
  }
  return w;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"MTSFM and classical sonar waveform design toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir, formats;
  std::optional<std::uint64_t> seed;

  const char* names[] = {"synth", "analyze", "optimize", "simulate", "compare"};
  const char* blurbs[] = {"write samples, metrics and an optional passband WAV",
                          "write spectrogram, spectrum, autocorrelation, ambiguity and metrics",
                          "run a region-constrained sidelobe design",
                          "simulate a point-echo scene through a matched-filter bank",
                          "tabulate metrics and Doppler tolerance for several waveforms"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    auto* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--format", formats, "comma-separated subset of csv,json,wav");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    CommandContext ctx;
    ctx.config = read_json(config_path);
    if (!ctx.config.is_object()) throw InvalidInput("config must be a JSON object");
    if (ctx.config.contains("command") && ctx.config.at("command") != command)
      throw InvalidInput("config is for '" + ctx.config.at("command").get<std::string>() +
                         "', not '" + command + "'");
    ctx.base_dir = fs::path(config_path).parent_path();
    ctx.output = parse_output(ctx.config);
    if (!out_dir.empty()) ctx.output.dir = out_dir;
    if (!formats.empty()) apply_formats(ctx.output, formats);
    ctx.seed = seed;

    Written w;
    if (command == "synth") w = cmd_synth(ctx);
    else if (command == "analyze") w = cmd_analyze(ctx);
    else if (command == "optimize") w = cmd_optimize(ctx);
    else if (command == "simulate") w = cmd_simulate(ctx);
    else w = cmd_compare(ctx);
    for (const auto& p : w) std::cout << p.string() << '\n';
    return kOk;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace wavedesign::cli
