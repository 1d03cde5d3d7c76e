// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   mcsa_acceptance [--out-dir DIR]
//
// DIR receives the files written by the determinism check (default: a
// directory named acceptance_out under the current one).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dft_oracle.hpp"
#include "mcsa/ann.hpp"
#include "mcsa/daq.hpp"
#include "mcsa/features.hpp"
#include "mcsa/fft.hpp"
#include "mcsa/fixtures.hpp"
#include "mcsa/motor.hpp"
#include "mcsa/random.hpp"
#include "mcsa/sidebands.hpp"
#include "mcsa/spectrum.hpp"
#include "mcsa/text.hpp"

namespace fs = std::filesystem;
using namespace mcsa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 6) { return text::format_sig(v, digits); }

// --- 1 --------------------------------------------------------------------------

Outcome slip_reproduction() {
  const double s = compute_slip(MotorParams::lab_motor(), 2500.0).slip;
  return {std::abs(s - 0.1667) <= 0.0005, "s=" + fmt(s) + " (want 0.1667 +- 0.0005)"};
}

// --- 2, 3 -----------------------------------------------------------------------

Outcome thirty_turns_table() {
  const auto tables = builtin_fixtures();
  const auto ks = odd_orders(21);
  const auto grid = flux_harmonics(1.0 / 6.0, 1, 50.0, ks, NSchedule::half_k_plus_one);
  const auto report = match_table(grid, find_fixture(tables, FixtureCase::thirty_turns), 1.0);
  const auto fails = report.failures();
  const bool expected_misses = fails.size() == 2 && fails[0]->k == 3 && fails[0]->branch == Branch::positive &&
                               fails[1]->k == 13 && fails[1]->branch == Branch::negative;
  std::string detail = std::to_string(report.pass_count()) + "/" + std::to_string(report.rows.size()) +
                       " within 1 Hz; misses:";
  for (const auto* r : fails) {
    detail += " k=" + std::to_string(r->k) + std::string(r->branch == Branch::positive ? "p" : "n") + " (" +
              fmt(r->predicted_hz, 5) + " vs " + fmt(r->fixture_hz, 5) + ")";
  }
  return {report.rows.size() == 22 && report.pass_count() == 20 && expected_misses, detail};
}

Outcome ten_turns_table() {
  const auto tables = builtin_fixtures();
  const auto ks = odd_orders(19);
  const auto grid = flux_harmonics(0.133, 1, 50.0, ks, NSchedule::fixed_one);
  const auto report = match_table(grid, find_fixture(tables, FixtureCase::ten_turns), 1.0);
  double worst = 0.0;
  for (const auto& r : report.rows) worst = std::max(worst, r.abs_delta_hz);
  return {report.rows.size() == 20 && report.all_pass(),
          std::to_string(report.pass_count()) + "/" + std::to_string(report.rows.size()) +
              " within 1 Hz, worst |delta| " + fmt(worst, 4) + " Hz"};
}

// --- 4 --------------------------------------------------------------------------

Outcome sampling() {
  const SamplingPlan p = sampling_plan(6, 65, 0.02);
  const bool ok = p.n_samples == 390 && std::abs(p.sample_rate_hz - 3250.0) <= 1e-9 &&
                  text::format_sig(p.sample_time_s, 7) == "0.0003076923";
  return {ok, "n=" + std::to_string(p.n_samples) + " fs=" + fmt(p.sample_rate_hz, 10) +
                  " Hz Ts=" + text::format_sig(p.sample_time_s, 7) + " s"};
}

// --- 5 --------------------------------------------------------------------------

Outcome spectrum_correctness() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> g;
  double worst_fft = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 13u, 390u, 1024u}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {g(gen), g(gen)};
    worst_fft = std::max(worst_fft, oracle::max_rel_error(fft(x), oracle::direct_dft(x)));
  }
  double worst_parseval = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(390);
    for (auto& v : x) v = g(gen);
    const auto X = fft_real(x, x.size());
    double time = 0.0, freq = 0.0;
    for (double v : x) time += v * v;
    for (const auto& c : X) freq += std::norm(c);
    freq /= 390.0;
    worst_parseval = std::max(worst_parseval, std::abs(time - freq) / time);
  }
  return {worst_fft <= 1e-9 && worst_parseval <= 1e-9,
          "max oracle rel err " + fmt(worst_fft, 3) + ", max Parseval rel err " + fmt(worst_parseval, 3) +
              " (limit 1e-9)"};
}

// --- 6 --------------------------------------------------------------------------

struct RecoveryRun {
  std::string spectrum_csv;
  std::string features_csv;
  double worst_rel = 0.0;
  std::string worst_at;
};

RecoveryRun sideband_recovery_run() {
  const auto tables = builtin_fixtures();
  SynthesisConfig cfg;
  cfg.n_samples = 3900;
  const Waveform w = synthesize(MotorParams::lab_motor(), fault_from_tables(FixtureCase::thirty_turns, tables), cfg);
  const Spectrum s = transform(w, Window::hann);
  const SidebandGrid grid = grid_from_fixture(find_fixture(tables, FixtureCase::thirty_turns));
  ExtractOptions opts;
  opts.normalize = Normalize::none;
  opts.estimator = Estimator::fit;
  const FeatureVector fv = extract_features(s, grid, opts);

  RecoveryRun run;
  for (std::size_t i = 0; i < grid.entries.size(); ++i) {
    const double want = *grid.entries[i].amplitude;
    const double rel = std::abs(fv.values[i] - want) / want;
    if (rel >= run.worst_rel) {
      run.worst_rel = rel;
      run.worst_at = fmt(grid.entries[i].freq_hz, 5) + " Hz (" + fmt(fv.values[i], 5) + " vs " + fmt(want, 5) + ")";
    }
  }
  std::ostringstream spec, feat;
  write_spectrum(spec, s);
  write_dataset(feat, {fv});
  run.spectrum_csv = spec.str();
  run.features_csv = feat.str();
  return run;
}

Outcome sideband_recovery() {
  const RecoveryRun run = sideband_recovery_run();
  return {run.worst_rel <= 0.05, "22 amplitudes, worst rel err " + fmt(run.worst_rel, 3) + " at " + run.worst_at +
                                     " (limit 5%)"};
}

// --- 7 --------------------------------------------------------------------------

struct TrainingRun {
  std::string dataset_csv;
  std::string model_txt;
  std::string loss_csv;
  double holdout_accuracy = 0.0;
  std::size_t holdout_size = 0;
  int epochs = 0;
};

TrainingRun training_run() {
  constexpr std::uint64_t seed = 7;
  const auto data = build_dataset(default_cases(builtin_fixtures()), 100, 0.02, seed);
  const auto [train_set, test_set] = split_holdout(data, 0.2, seed);
  const std::size_t sizes[] = {data.front().values.size(), 16, 3};
  const MlpModel init = init_model(sizes, Activation::sigmoid, seed);
  TrainConfig cfg;
  cfg.epochs = 500;
  cfg.seed = seed;
  const TrainResult r = train(init, train_set, cfg);

  TrainingRun run;
  run.holdout_accuracy = accuracy(r.model, test_set);
  run.holdout_size = test_set.size();
  run.epochs = static_cast<int>(r.loss_history.size());
  std::ostringstream ds, model, loss;
  write_dataset(ds, data);
  save_model(model, r.model);
  loss << "epoch,loss\n";
  for (std::size_t i = 0; i < r.loss_history.size(); ++i) {
    loss << i + 1 << ',' << text::format_exact(r.loss_history[i]) << '\n';
  }
  run.dataset_csv = ds.str();
  run.model_txt = model.str();
  run.loss_csv = loss.str();
  return run;
}

Outcome ann_verification() {
  Rng rng(derive_seed(7, 0xC4EC));
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const std::size_t sizes[] = {10, 16, 3};
    const auto act = draw % 2 ? Activation::tanh : Activation::sigmoid;
    const MlpModel m = init_model(sizes, act, derive_seed(7, 0xC4EC, static_cast<std::uint64_t>(draw) + 1));
    std::vector<double> x(10);
    for (auto& v : x) v = rng.uniform();
    worst = std::max(worst, gradient_check(m, x, rng.index(3), 1e-5));
  }
  const TrainingRun run = training_run();
  const bool ok = worst < 1e-4 && run.holdout_accuracy >= 0.95 && run.epochs <= 500;
  return {ok, "gradient check max rel err " + fmt(worst, 3) + " over 20 draws (limit 1e-4); held-out accuracy " +
                  fmt(100.0 * run.holdout_accuracy, 4) + "% on " + std::to_string(run.holdout_size) +
                  " vectors after " + std::to_string(run.epochs) + " epochs (limit >= 95%)"};
}

// --- 8 --------------------------------------------------------------------------

Outcome daq_protocol() {
  int roundtrip_failures = 0;
  for (int c = 0; c < 256; ++c) {
    const auto [lo, hi] = encode_nibbles(static_cast<std::uint8_t>(c));
    if (decode_nibbles(lo, hi) != c) ++roundtrip_failures;
  }
  const AdcConfig cfg;
  const bool endpoints = quantize(cfg, 0.0) == 0x00 && quantize(cfg, 5.0) == 0xFF;
  double worst = 0.0;
  for (int i = 0; i <= 50000; ++i) {
    const double v = 5.0 * i / 50000.0;
    worst = std::max(worst, std::abs(dequantize(cfg, quantize(cfg, v)) - v));
  }
  const bool ok = roundtrip_failures == 0 && endpoints && worst <= 5.0 / 510.0 + 1e-12;
  return {ok, "256/256 round-trip " + std::string(roundtrip_failures ? "FAILED" : "ok") + ", 0V->0x00 5V->0xFF " +
                  (endpoints ? "ok" : "FAILED") + ", max quantization error " + fmt(worst, 4) + " V (limit " +
                  fmt(5.0 / 510.0, 4) + " V)"};
}

// --- 9 --------------------------------------------------------------------------

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& out_dir) {
  std::vector<std::string> names;
  for (int pass = 1; pass <= 2; ++pass) {
    const fs::path dir = out_dir / ("run" + std::to_string(pass));
    fs::create_directories(dir);
    const RecoveryRun rec = sideband_recovery_run();
    const TrainingRun tr = training_run();
    const std::pair<const char*, const std::string*> files[] = {
        {"thirty_turns.spectrum.csv", &rec.spectrum_csv},
        {"thirty_turns.features.csv", &rec.features_csv},
        {"dataset.csv", &tr.dataset_csv},
        {"model.txt", &tr.model_txt},
        {"loss.csv", &tr.loss_csv},
    };
    names.clear();
    for (const auto& [name, body] : files) {
      write_file(dir / name, *body);
      names.push_back(name);
    }
  }
  std::size_t identical = 0;
  for (const auto& n : names) {
    if (read_file(out_dir / "run1" / n) == read_file(out_dir / "run2" / n)) ++identical;
  }
  return {identical == names.size(), std::to_string(identical) + "/" + std::to_string(names.size()) +
                                         " output files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out_dir = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out-dir" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--out-dir DIR]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "slip reproduction", 1.0, slip_reproduction},
      {2, "thirty_turns table frequencies", 1.0, thirty_turns_table},
      {3, "ten_turns table frequencies", 1.0, ten_turns_table},
      {4, "sampling plan", 1.0, sampling},
      {5, "spectrum vs direct DFT and Parseval", 30.0, spectrum_correctness},
      {6, "end-to-end sideband recovery", 10.0, sideband_recovery},
      {7, "ANN gradient check and held-out accuracy", 60.0, ann_verification},
      {8, "DAQ nibble protocol and quantizer", 1.0, daq_protocol},
      {9, "determinism of criteria 6-7 outputs", 70.0, [&] { return determinism(out_dir); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s AC%d %s: %s [%.2fs, limit %gs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", OVER TIME");
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed ? 1 : 0;
}
