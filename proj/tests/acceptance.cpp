// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavedesign/costas.hpp"
#include "wavedesign/design.hpp"
#include "wavedesign/metrics.hpp"
#include "wavedesign/optimizer.hpp"
#include "wavedesign/scene.hpp"
#include "wavedesign/waveforms.hpp"

using namespace wavedesign;

namespace {

constexpr double kB = 256, kT = 1, kFs = 2048;
int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double modulus_error(const SampledSignal& s) {
  const double a = 1.0 / std::sqrt(s.duration_s());
  double e = 0;
  for (auto v : s.samples()) e = std::max(e, std::abs(std::abs(v) - a));
  return e;
}

// The TBP-256 design: K = 32, B = 256 Hz, T = 1 s, default region, ISL, 20k evaluations.
RegionDesignConfig tbp256_config() {
  RegionDesignConfig c;
  c.rms_target_hz = 80;
  return c;
}

SampledSignal costas16() { return synth_costas_fsk(generate_welch_costas(17, 3), kB, kT, kFs); }

struct Design {
  OptimizationResult result;
  OptimizationProblem problem;
  SampledSignal signal;
  MetricsReport metrics;
};

Design run_design() {
  const auto c = tbp256_config();
  auto r = design_region_mtsfm(c);
  auto p = make_region_design_problem(c);
  auto s = synth_mtsfm(r.final, p.sample_rate_hz);
  auto m = compute_metrics(s, p.region, c.bandwidth_hz);
  return {std::move(r), std::move(p), std::move(s), m};
}

void criterion1(const Design& d) {
  const double costas = psl_region(autocorrelation(costas16()), d.problem.region);
  const bool costas_ok = std::abs(costas - (-24.1)) <= 1.0;
  const bool psl_ok = d.metrics.psl_db <= -40.0;
  const bool margin_ok = d.metrics.psl_db <= costas - 10.0;
  const bool budget_ok = d.result.evaluations_used <= 20000 && d.problem.initial.num_harmonics() == 32;
  report(1, psl_ok && margin_ok && costas_ok && budget_ok, "TBP-256 region design",
         fmt("MTSFM region PSL %.2f dB (need <= -40), ISL %.2f dB, %zu evals; Costas-16 region PSL %.2f dB "
             "(need -24.1 +/- 1); margin %.2f dB (need >= 10)",
             d.metrics.psl_db, d.metrics.isl_db, d.result.evaluations_used, costas, costas - d.metrics.psl_db));
}

void criterion2(const Design& d) {
  const auto scene = graded_echo_scene(kB);
  const auto costas = costas16();
  const auto rc = resolvability_report(mf_bank(simulate_returns(costas, scene), costas, {0.0}), scene, kB);
  const auto rm = resolvability_report(mf_bank(simulate_returns(d.signal, scene), d.signal, {0.0}), scene, kB);
  std::size_t costas_missed = 0, mtsfm_found = 0;
  double worst_err = 0;
  for (const auto& e : rc) costas_missed += !e.detected;
  for (const auto& e : rm) {
    mtsfm_found += e.detected;
    worst_err = std::max(worst_err, e.position_error_s);
  }
  const bool ok = costas_missed >= 1 && mtsfm_found == scene.echoes.size() && worst_err < 1 / (2 * kB);
  report(2, ok, "six-echo 40 dB scene",
         fmt("Costas-16 misses %zu of 6; MTSFM detects %zu of 6, worst position error %.3g s (limit %.3g s)",
             costas_missed, mtsfm_found, worst_err, 1 / (2 * kB)));
}

void criterion3(const Design& d) {
  const double swept = swept_bandwidth(d.result.final);
  const auto sm = spectrum(d.signal, 4);
  const auto p4 = synth_p4(static_cast<std::size_t>(std::lround(swept * kT)), swept, kT, d.signal.sample_rate_hz());
  const auto sp = spectrum(p4, 4);
  const double fm = inband_energy_fraction(sm, swept), fp = inband_energy_fraction(sp, swept);
  const double wm = p99_bandwidth(sm), wp = p99_bandwidth(sp);
  const bool ok = fm >= 0.95 && fm > fp && wp > 2 * wm;
  report(3, ok, "spectral compactness",
         fmt("swept B %.1f Hz: MTSFM in-band %.4f, P4 in-band %.4f; p99 width MTSFM %.1f Hz, P4 %.1f Hz "
             "(ratio %.2f); MTSFM in-band at nominal %g Hz %.4f",
             swept, fm, fp, wm, wp, wp / wm, kB, inband_energy_fraction(sm, kB)));
}

void criterion4() {
  double worst = 0;
  for (double b : {0.5, 2.0}) {
    const auto s = spectrum(synth_mtsfm(MtsfmParameters({0.0}, {b}, kT), 1024), 1);
    const std::size_t zero = s.freqs_hz.size() / 2;
    for (int n = -10; n <= 10; ++n)
      worst = std::max(worst, std::abs(s.magnitude[zero + n] / std::sqrt(kT) - std::abs(std::cyl_bessel_j(std::abs(n), b))));
  }
  report(4, worst <= 1e-8, "single-harmonic spectral lines vs Bessel", fmt("max |error| %.2e (limit 1e-8)", worst));
}

void criterion5() {
  std::size_t arrays = 0, bad = 0;
  for (std::int64_t p = 2; p <= 100; ++p) {
    if (!is_prime(p)) continue;
    for (auto g : primitive_roots(p)) {
      ++arrays;
      if (!verify_costas(generate_welch_costas(p, g).sequence())) ++bad;
    }
  }
  std::size_t perms = 0, mismatch = 0;
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      ++perms;
      if (verify_costas(perm) != oracle::costas_bruteforce(perm)) ++mismatch;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const double plateau = psl_region(autocorrelation(costas16()), default_region(kB, kT));
  const bool ok = arrays > 0 && bad == 0 && mismatch == 0 && std::abs(plateau + 24.1) <= 1.0;
  report(5, ok, "Costas suite",
         fmt("%zu Welch arrays, %zu rejected; %zu permutations, %zu brute-force mismatches; "
             "Costas-16 plateau %.2f dB (need -24.1 +/- 1)",
             arrays, bad, perms, mismatch, plateau));
}

void criterion6() {
  const auto cw = synth_cw(kT, 8192);
  const auto ac = autocorrelation(synth_cw(kT, 1000));
  double tri = 0;
  for (std::size_t i = 0; i < ac.values.size(); ++i)
    tri = std::max(tri, std::abs(std::abs(ac.values[i]) - (1 - std::abs(ac.lags_s[i]) / kT)));

  const auto af_cw = ambiguity_function(cw, 0.01, 5.0, 3, 101);
  double sinc_err = 0;
  for (std::size_t q = 0; q < af_cw.dopplers_hz.size(); ++q) {
    const double x = af_cw.dopplers_hz[q] * kT;
    const double ref = x == 0 ? 1.0 : std::abs(std::sin(M_PI * x) / (M_PI * x));
    sinc_err = std::max(sinc_err, std::abs(af_cw.magnitude[q][1] - ref));
  }

  const auto lac = autocorrelation(synth_lfm(kB, kT, kFs));
  std::size_t i = lac.zero_index + 1;
  while (lac.magnitude_db[i + 1] < lac.magnitude_db[i]) ++i;
  while (lac.magnitude_db[i + 1] > lac.magnitude_db[i]) ++i;
  const double sidelobe = lac.magnitude_db[i];

  const auto af = ambiguity_function(synth_mtsfm(tapered_fm_phase_fit(16, 128, 0.5, 1.0), 1024), 0.25, 64, 65, 33);
  double sym = 0;
  for (std::size_t q = 0; q < 33; ++q)
    for (std::size_t p = 0; p < 65; ++p) sym = std::max(sym, std::abs(af.magnitude[q][p] - af.magnitude[32 - q][64 - p]));
  const double origin = std::abs(af.magnitude[16][32] - 1.0);

  const bool ok = tri <= 1e-9 && sinc_err <= 1e-6 && std::abs(sidelobe + 13.2) <= 0.5 && sym <= 1e-9 && origin <= 1e-9;
  report(6, ok, "analytic oracles",
         fmt("CW triangle %.1e; CW sinc cut %.1e; LFM first sidelobe %.2f dB; AF symmetry %.1e; |chi(0,0) - 1| %.1e",
             tri, sinc_err, sidelobe, sym, origin));
}

void criterion7(const Design& d) {
  std::vector<std::pair<const char*, SampledSignal>> fm = {
      {"cw", synth_cw(kT, kFs)},
      {"lfm", synth_lfm(kB, kT, kFs)},
      {"hfm", synth_hfm(256, 512, kT, kFs)},
      {"costas", costas16()},
      {"p4", synth_p4(256, kB, kT, kFs)},
      {"mtsfm-start", synth_mtsfm(d.problem.initial, d.problem.sample_rate_hz)},
      {"mtsfm-design", d.signal},
  };
  // finals of the other optimizers on a reduced problem
  auto small = d.problem;
  small.budget = 1500;
  fm.emplace_back("mtsfm-neldermead", synth_mtsfm(minimize_nelder_mead(small).final, small.sample_rate_hz));
  fm.emplace_back("mtsfm-descent", synth_mtsfm(minimize_gradient_descent(small).final, small.sample_rate_hz));
  double worst_mod = 0, worst_energy = 0;
  std::string worst = "none";
  for (const auto& [name, s] : fm) {
    const double m = modulus_error(s), e = std::abs(s.energy() - 1.0);
    if (std::max(m, e) > std::max(worst_mod, worst_energy)) worst = name;
    worst_mod = std::max(worst_mod, m);
    worst_energy = std::max(worst_energy, e);
  }
  report(7, worst_mod <= 1e-12 && worst_energy <= 1e-12, "constant modulus and unit energy",
         fmt("%zu FM-class pulses; max modulus error %.1e, max energy error %.1e (worst: %s)", fm.size(), worst_mod,
             worst_energy, worst.c_str()));
}

void criterion8(const Design& d) {
  const auto again = run_design();
  bool opt_same = again.result.final.alpha == d.result.final.alpha && again.result.final.beta == d.result.final.beta &&
                  again.result.trace.size() == d.result.trace.size();
  for (std::size_t i = 0; opt_same && i < d.result.trace.size(); ++i)
    opt_same = again.result.trace[i].evaluation == d.result.trace[i].evaluation &&
               again.result.trace[i].objective == d.result.trace[i].objective;

  EchoScene scene = graded_echo_scene(kB);
  scene.noise_level_db = -30;
  const auto a = simulate_returns(d.signal, scene, 9), b = simulate_returns(d.signal, scene, 9);
  const std::vector<double> nus = {-8, 0, 8};
  const auto ma = mf_bank(a, d.signal, nus), mb = mf_bank(b, d.signal, nus);
  const bool sim_same = a.samples() == b.samples() && ma.magnitude_db == mb.magnitude_db;
  report(8, opt_same && sim_same, "seeded reruns are identical",
         fmt("design rerun %s (%zu trace points); simulate rerun %s", opt_same ? "identical" : "differs",
             d.result.trace.size(), sim_same ? "identical" : "differs"));
}

void criterion9() {
  // one carrier for all three: the HFM band [256, 512] Hz centred on 384 Hz
  const double fc = 384, nu = 0.1 * kB;
  const double grid[] = {nu};
  const auto loss = [&](const SampledSignal& s) {
    return -doppler_tolerance_curve(s, grid, DopplerModel::Wideband)[0].peak_loss_db;
  };
  const double cw = loss(synth_cw(kT, kFs).with_center_freq(fc));
  const double lfm = loss(synth_lfm(kB, kT, kFs).with_center_freq(fc));
  const double hfm = loss(synth_hfm(fc - kB / 2, fc + kB / 2, kT, kFs));
  report(9, cw > lfm && lfm > hfm, "Doppler tolerance ordering at 0.1 B",
         fmt("wideband loss at %.1f Hz, carrier %.0f Hz: CW %.2f dB, LFM %.2f dB, HFM %.2f dB", nu, fc, cw, lfm, hfm));
}

}  // namespace

int main() {
  const auto design = run_design();
  criterion1(design);
  criterion2(design);
  criterion3(design);
  criterion4();
  criterion5();
  criterion6();
  criterion7(design);
  criterion8(design);
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
