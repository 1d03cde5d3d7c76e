// mcsa: command-line front end for the MCSA toolkit.
//
// Exit codes: 0 success, 1 check failure (a match or round-trip check ran
// and did not hold), 2 usage or input error, 3 numeric divergence.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "mcsa/ann.hpp"
#include "mcsa/daq.hpp"
#include "mcsa/error.hpp"
#include "mcsa/features.hpp"
#include "mcsa/fixtures.hpp"
#include "mcsa/motor.hpp"
#include "mcsa/random.hpp"
#include "mcsa/sidebands.hpp"
#include "mcsa/spectrum.hpp"
#include "mcsa/text.hpp"

namespace {

using namespace mcsa;
using cli::RunManifest;

constexpr const char* kVersion = "mcsa 0.1.0";

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kDiverged = 3 };

/// Usage error tied to a flag; reported with exit code 2.
class FlagError : public Error {
 public:
  FlagError(const std::string& flag, const std::string& what) : Error(flag + ": " + what) {}
};

RunManifest manifest_for(const CLI::App& sub, const std::string& command) {
  RunManifest m;
  m.command = command;
  m.tool_version = kVersion;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    m.parameters.emplace_back(opt->get_name(), value);
  }
  return m;
}

std::vector<FixtureTable> fixtures_from(const std::string& path, RunManifest* manifest) {
  if (path.empty()) return builtin_fixtures();
  if (manifest) manifest->add_input(path);
  return load_fixtures_file(path);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

Waveform read_waveform_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open waveform '" + path + "'");
  return read_waveform(in);
}

// --- slip / grid flags shared by sidebands and analyze -----------------------

struct SlipFlags {
  std::optional<double> s;
  std::optional<double> ns;
  std::optional<double> nr;
  int p = 1;
  double f = 50.0;

  void add(CLI::App* app) {
    app->add_option("--s", s, "Slip (overrides --ns/--nr)");
    app->add_option("--ns", ns, "Synchronous speed, rpm (default 60 f / p)");
    app->add_option("--nr", nr, "Rotor speed, rpm");
    app->add_option("--p", p, "Pole pairs")->capture_default_str();
    app->add_option("--f,--f1", f, "Supply frequency, Hz")->capture_default_str();
  }

  double resolve() const {
    if (s) {
      if (!(*s >= 0.0 && *s < 1.0)) throw FlagError("--s", "slip must lie in [0, 1)");
      return *s;
    }
    if (!nr) throw FlagError("--s", "give either --s or --nr (with optional --ns)");
    if (p < 1) throw FlagError("--p", "pole pairs must be >= 1");
    const double sync = ns.value_or(60.0 * f / p);
    MotorParams motor(p, f, sync, 1.0, 1.0);
    try {
      return compute_slip(motor, *nr).slip;
    } catch (const DomainError& e) {
      throw FlagError("--nr", e.what());
    }
  }
};

// --- synth --------------------------------------------------------------------

struct SynthFlags {
  double f1 = 50.0;
  int p = 1;
  std::optional<double> ns;
  std::optional<double> nr;
  std::string fault = "healthy";
  std::vector<std::string> components;
  std::string label = "broken_bar";
  std::string fixtures;
  double fs = 3250.0;
  std::size_t n = 390;
  double amp = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

FaultComponent parse_component(const std::string& spec) {
  const auto parts = text::split(spec, ':');
  FaultComponent c;
  if ((parts.size() != 2 && parts.size() != 3) || !text::parse_double(parts[0], c.freq_hz) ||
      !text::parse_double(parts[1], c.amplitude) ||
      (parts.size() == 3 && !text::parse_double(parts[2], c.phase_rad))) {
    throw FlagError("--component", "expected freq:amp[:phase], got '" + spec + "'");
  }
  return c;
}

int run_synth(const SynthFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "synth");
  if (f.p < 1) throw FlagError("--p", "pole pairs must be >= 1");
  std::optional<MotorParams> motor;
  try {
    motor.emplace(f.p, f.f1, f.ns.value_or(60.0 * f.f1 / f.p), 2.2, 9.0);
  } catch (const ConfigError& e) {
    throw FlagError("--ns", e.what());
  }
  if (f.nr) {
    try {
      compute_slip(*motor, *f.nr);
    } catch (const DomainError& e) {
      throw FlagError("--nr", e.what());
    }
  }

  FaultSignature fault;
  if (f.fault == "healthy") {
    fault = FaultSignature::healthy();
  } else if (f.fault == "ten_turns" || f.fault == "thirty_turns") {
    fault = fault_from_tables(parse_fixture_case(f.fault), fixtures_from(f.fixtures, &manifest));
  } else if (f.fault == "custom") {
    std::vector<FaultComponent> comps;
    for (const auto& c : f.components) comps.push_back(parse_component(c));
    try {
      fault = FaultSignature(parse_fault_label(f.label), std::move(comps));
    } catch (const Error& e) {
      throw FlagError("--label", e.what());
    }
  } else {
    throw FlagError("--fault", "expected healthy, ten_turns, thirty_turns or custom");
  }

  SynthesisConfig cfg;
  cfg.fundamental_amp = f.amp;
  cfg.sample_rate_hz = f.fs;
  cfg.n_samples = f.n;
  cfg.noise_sigma = f.noise;
  cfg.seed = f.seed;
  std::optional<Waveform> w;
  try {
    w.emplace(synthesize(*motor, fault, cfg));
  } catch (const ConfigError& e) {
    throw FlagError("--fs", e.what());
  }

  std::ostringstream body;
  write_waveform(body, *w);
  write_text(f.out, body.str());
  manifest.write_for(f.out);
  std::cout << "wrote " << w->size() << " samples at fs=" << text::format_shortest(w->sample_rate_hz())
            << " Hz to " << f.out << '\n';
  return kOk;
}

// --- sidebands ------------------------------------------------------------------

struct SidebandFlags {
  SlipFlags slip;
  int k_max = 21;
  std::string schedule = "n1";
  bool broken_bar = false;
  std::vector<int> orders{1};
  std::string match_case;
  double tol = 1.0;
  std::string fixtures;
  std::string out;
};

int run_sidebands(const SidebandFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "sidebands");
  const double s = f.slip.resolve();
  if (f.k_max < 1) throw FlagError("--k-max", "must be >= 1");

  SidebandGrid grid;
  if (f.broken_bar) {
    try {
      grid = broken_bar_sidebands(s, f.slip.f, f.orders);
    } catch (const DomainError& e) {
      throw FlagError("--s", e.what());
    }
  } else {
    NSchedule schedule;
    try {
      schedule = parse_schedule(f.schedule);
    } catch (const ParseError& e) {
      throw FlagError("--schedule", e.what());
    }
    grid = flux_harmonics(s, f.slip.p, f.slip.f, odd_orders(f.k_max), schedule);
  }

  std::ostringstream body;
  int code = kOk;
  if (!f.match_case.empty()) {
    FixtureCase c;
    try {
      c = parse_fixture_case(f.match_case);
    } catch (const ParseError& e) {
      throw FlagError("--match-case", e.what());
    }
    const auto tables = fixtures_from(f.fixtures, &manifest);
    const MatchReport report = match_table(grid, find_fixture(tables, c), f.tol);
    write_match_report(body, report);
    std::cerr << report.pass_count() << "/" << report.rows.size() << " rows within +-"
              << text::format_shortest(f.tol) << " Hz\n";
    for (const MatchRow* r : report.failures()) {
      std::cerr << "  mismatch k=" << r->k << " " << to_string(r->branch) << ": predicted "
                << text::format_sig(r->predicted_hz, 6) << " Hz, table "
                << text::format_shortest(r->fixture_hz) << " Hz\n";
    }
    if (!report.all_pass()) code = kCheckFailed;
  } else {
    write_grid(body, grid);
  }

  if (f.out.empty()) {
    std::cout << body.str();
  } else {
    write_text(f.out, body.str());
    manifest.write_for(f.out);
  }
  return code;
}

// --- analyze -------------------------------------------------------------------

struct AnalyzeFlags {
  std::string in;
  std::string window = "hann";
  std::string grid_from = "flags";
  std::string fixture_case = "thirty_turns";
  std::string fixtures;
  SlipFlags slip;
  int k_max = 9;
  std::string schedule = "n1";
  std::string normalize = "by_fundamental";
  std::string estimator = "fit";
  std::optional<std::size_t> n_fft;
  std::string out_prefix;
};

int run_analyze(const AnalyzeFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "analyze");
  Waveform w = [&] {
    try {
      return read_waveform_file(f.in);
    } catch (const Error& e) {
      throw FlagError("--in", e.what());
    }
  }();
  manifest.add_input(f.in);

  ExtractOptions opts;
  Window window;
  try {
    window = parse_window(f.window);
    opts.normalize = parse_normalize(f.normalize);
    opts.estimator = parse_estimator(f.estimator);
  } catch (const ParseError& e) {
    throw FlagError("--window/--normalize/--estimator", e.what());
  }

  SidebandGrid grid;
  if (f.grid_from == "fixture") {
    FixtureCase c;
    try {
      c = parse_fixture_case(f.fixture_case);
    } catch (const ParseError& e) {
      throw FlagError("--case", e.what());
    }
    grid = grid_from_fixture(find_fixture(fixtures_from(f.fixtures, &manifest), c));
  } else if (f.grid_from == "flags") {
    if (f.k_max < 1) throw FlagError("--k-max", "must be >= 1");
    NSchedule schedule;
    try {
      schedule = parse_schedule(f.schedule);
    } catch (const ParseError& e) {
      throw FlagError("--schedule", e.what());
    }
    grid = flux_harmonics(f.slip.resolve(), f.slip.p, f.slip.f, odd_orders(f.k_max), schedule);
  } else {
    throw FlagError("--grid-from", "expected flags or fixture");
  }

  const Spectrum s = transform(w, window, f.n_fft);
  const FeatureVector fv = extract_features(s, grid, opts);

  const std::string spectrum_path = f.out_prefix + ".spectrum.csv";
  const std::string features_path = f.out_prefix + ".features.csv";
  const std::string summary_path = f.out_prefix + ".summary.txt";

  std::ostringstream spec_body, feat_body, summary;
  write_spectrum(spec_body, s);
  write_dataset(feat_body, {fv});
  summary << "n_samples=" << w.size() << '\n'
          << "fs_hz=" << text::format_sig(w.sample_rate_hz(), 10) << '\n'
          << "ts_s=" << text::format_sig(1.0 / w.sample_rate_hz(), 7) << '\n'
          << "duration_s=" << text::format_sig(w.duration_s(), 10) << '\n'
          << "n_fft=" << s.n_fft << '\n'
          << "bin_hz=" << text::format_sig(s.bin_hz, 5) << '\n'
          << "window=" << to_string(s.window) << '\n'
          << "estimator=" << to_string(opts.estimator) << '\n'
          << "normalize=" << to_string(opts.normalize) << '\n'
          << "layout=" << layout_string(fv.layout) << '\n';
  for (std::size_t i = 0; i < grid.entries.size(); ++i) {
    const auto& e = grid.entries[i];
    summary << "feature k=" << e.k << ' ' << to_string(e.branch) << " target_hz="
            << text::format_sig(e.freq_hz, 8) << " value=" << text::format_sig(fv.values[i], 8) << '\n';
  }

  write_text(spectrum_path, spec_body.str());
  write_text(features_path, feat_body.str());
  write_text(summary_path, summary.str());
  for (const auto& p : {spectrum_path, features_path, summary_path}) manifest.write_for(p);
  std::cout << summary.str();
  return kOk;
}

// --- dataset -------------------------------------------------------------------

struct DatasetFlags {
  int per_case = 100;
  double noise = 0.02;
  std::uint64_t seed = 7;
  std::string fixtures;
  int k_max = 9;
  std::string schedule = "n1";
  double fs = 3250.0;
  std::size_t n = 390;
  std::string out;
};

int run_dataset(const DatasetFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "dataset");
  if (f.per_case < 1) throw FlagError("--per-case", "must be >= 1");
  const auto tables = fixtures_from(f.fixtures, &manifest);
  DatasetConfig cfg;
  cfg.k_values = odd_orders(f.k_max);
  try {
    cfg.schedule = parse_schedule(f.schedule);
  } catch (const ParseError& e) {
    throw FlagError("--schedule", e.what());
  }
  cfg.sample_rate_hz = f.fs;
  cfg.n_samples = f.n;
  const auto data = build_dataset(default_cases(tables, cfg.motor), f.per_case, f.noise, f.seed, cfg);
  std::ostringstream body;
  write_dataset(body, data);
  write_text(f.out, body.str());
  manifest.write_for(f.out);
  std::cout << "wrote " << data.size() << " feature vectors to " << f.out << '\n';
  return kOk;
}

// --- train / classify --------------------------------------------------------------

struct TrainFlags {
  std::string data;
  std::size_t hidden = 16;
  int epochs = 500;
  double lr = 0.5;
  std::size_t batch = 16;
  double l2 = 0.0;
  std::uint64_t seed = 7;
  std::string activation = "sigmoid";
  double holdout = 0.0;
  std::string out;
  std::string loss_out;
};

std::vector<FeatureVector> read_dataset_file(const std::string& path, const char* flag) {
  std::ifstream in(path);
  if (!in) throw FlagError(flag, "cannot open '" + path + "'");
  try {
    return read_dataset(in);
  } catch (const ParseError& e) {
    throw FlagError(flag, e.what());
  }
}

int run_train(const TrainFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "train");
  const auto data = read_dataset_file(f.data, "--data");
  manifest.add_input(f.data);
  if (data.empty()) throw FlagError("--data", "dataset is empty");
  if (!(f.holdout >= 0.0 && f.holdout < 1.0)) throw FlagError("--holdout", "must lie in [0, 1)");

  std::vector<FaultLabel> classes;
  for (auto l : {FaultLabel::healthy, FaultLabel::inter_turn_minor, FaultLabel::inter_turn_severe,
                 FaultLabel::broken_bar}) {
    for (const auto& fv : data) {
      if (fv.label == l) {
        classes.push_back(l);
        break;
      }
    }
  }
  const auto [train_set, test_set] = split_holdout(data, f.holdout, f.seed);

  Activation act;
  try {
    act = parse_activation(f.activation);
  } catch (const ParseError& e) {
    throw FlagError("--activation", e.what());
  }
  if (f.hidden < 1) throw FlagError("--hidden", "must be >= 1");
  const std::size_t sizes[3] = {data.front().values.size(), f.hidden, std::max<std::size_t>(classes.size(), 1)};
  const MlpModel init = init_model(sizes, act, f.seed, classes);

  TrainConfig cfg;
  cfg.learning_rate = f.lr;
  cfg.epochs = f.epochs;
  cfg.batch_size = f.batch;
  cfg.seed = f.seed;
  cfg.l2 = f.l2;
  const TrainResult result = train(init, train_set, cfg);

  std::ostringstream model_body, loss_body;
  save_model(model_body, result.model);
  loss_body << "epoch,loss\n";
  for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
    loss_body << i + 1 << ',' << text::format_exact(result.loss_history[i]) << '\n';
  }
  const std::string loss_path = f.loss_out.empty() ? f.out + ".loss.csv" : f.loss_out;
  write_text(f.out, model_body.str());
  write_text(loss_path, loss_body.str());
  manifest.write_for(f.out);
  manifest.write_for(loss_path);

  std::cout << "final_loss=" << text::format_sig(result.loss_history.back(), 8) << '\n'
            << "train_accuracy=" << text::format_sig(accuracy(result.model, train_set), 6) << '\n';
  if (!test_set.empty()) {
    std::cout << "holdout_accuracy=" << text::format_sig(accuracy(result.model, test_set), 6) << '\n';
  }
  return kOk;
}

struct ClassifyFlags {
  std::string model;
  std::string features;
  double threshold = 0.6;
};

int run_classify(const ClassifyFlags& f, const CLI::App&) {
  std::ifstream min(f.model);
  if (!min) throw FlagError("--model", "cannot open '" + f.model + "'");
  MlpModel model;
  try {
    model = load_model(min);
  } catch (const ParseError& e) {
    throw FlagError("--model", e.what());
  }
  const auto rows = read_dataset_file(f.features, "--features");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != model.input_size()) {
      throw FlagError("--features", "row " + std::to_string(i + 1) + " has " +
                                        std::to_string(rows[i].values.size()) + " values, model expects " +
                                        std::to_string(model.input_size()));
    }
  }
  std::cout << "label,confidence,uncertain\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = classify(model, rows[i].values, f.threshold);
    std::cout << to_string(c.label) << ',' << text::format_sig(c.confidence, 6) << ','
              << (c.uncertain ? "true" : "false") << '\n';
  }
  return kOk;
}

// --- daq -----------------------------------------------------------------------

struct DaqFlags {
  std::string in;
  std::string out;
  std::string channel = "current";
  double v_min = 0.0;
  double v_max = 5.0;
  std::optional<double> hold_rate;
  bool physical = false;
};

AdcConfig adc_from(const DaqFlags& f) {
  AdcConfig cfg;
  cfg.v_min = f.v_min;
  cfg.v_max = f.v_max;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw FlagError("--v-min/--v-max", e.what());
  }
  return cfg;
}

int run_daq_encode(const DaqFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "daq encode");
  const Waveform w = [&] {
    try {
      return read_waveform_file(f.in);
    } catch (const Error& e) {
      throw FlagError("--in", e.what());
    }
  }();
  manifest.add_input(f.in);
  Channel ch;
  try {
    ch = parse_channel(f.channel);
  } catch (const ParseError& e) {
    throw FlagError("--channel", e.what());
  }
  const auto chain = ch == Channel::current ? ConditioningChain::current_chain() : ConditioningChain::speed_chain();
  DaqCapture cap;
  try {
    cap = capture(w, chain, adc_from(f), channel_code(ch), f.hold_rate);
  } catch (const DomainError& e) {
    throw FlagError("--hold-rate", e.what());
  }
  std::ostringstream body;
  write_capture(body, cap);
  write_text(f.out, body.str());
  manifest.write_for(f.out);
  std::cout << "encoded " << cap.codes.size() << " samples (" << cap.saturations << " saturated) to " << f.out
            << '\n';
  return kOk;
}

int run_daq_decode(const DaqFlags& f, const CLI::App& sub) {
  RunManifest manifest = manifest_for(sub, "daq decode");
  std::ifstream in(f.in);
  if (!in) throw FlagError("--in", "cannot open '" + f.in + "'");
  const DaqCapture cap = read_capture(in);
  manifest.add_input(f.in);
  Waveform volts = decoded_volts(cap, adc_from(f));
  if (f.physical) {
    const auto chain = cap.channel_select == channel_code(Channel::speed) ? ConditioningChain::speed_chain()
                                                                          : ConditioningChain::current_chain();
    std::vector<double> v = volts.samples();
    for (auto& x : v) x = uncondition(chain, x);
    volts = Waveform(volts.sample_rate_hz(), std::move(v));
  }
  std::ostringstream body;
  write_waveform(body, volts);
  write_text(f.out, body.str());
  manifest.write_for(f.out);
  std::cout << "decoded " << volts.size() << " samples to " << f.out << '\n';
  return kOk;
}

// --- fixtures ------------------------------------------------------------------

struct FixtureFlags {
  std::string fixtures;
  bool check = false;
};

int run_fixtures(const FixtureFlags& f, const CLI::App&) {
  const std::string original = f.fixtures.empty() ? std::string(builtin_fixture_text()) : cli::read_file(f.fixtures);
  std::istringstream in(original);
  const auto tables = load_fixtures(in);
  const std::string canonical = serialize_fixtures(tables);
  if (f.check) {
    for (const auto& t : tables) {
      std::cout << to_string(t.case_id) << ": " << t.rows.size() << " rows, slip "
                << text::format_shortest(t.meta.slip) << '\n';
    }
    if (canonical != original) {
      std::cerr << "fixture file is not in canonical form\n";
      return kCheckFailed;
    }
    std::cout << "canonical round-trip ok\n";
    return kOk;
  }
  std::cout << canonical;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motor current signature analysis toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a stator-current waveform (WFM-CSV)");
  synth_cmd->add_option("--f1", synth.f1, "Supply frequency, Hz")->capture_default_str();
  synth_cmd->add_option("--p", synth.p, "Pole pairs")->capture_default_str();
  synth_cmd->add_option("--ns", synth.ns, "Synchronous speed, rpm (must equal 60 f1 / p)");
  synth_cmd->add_option("--nr", synth.nr, "Rotor speed, rpm (checked against --ns)");
  synth_cmd->add_option("--fault", synth.fault, "healthy | ten_turns | thirty_turns | custom")->capture_default_str();
  synth_cmd->add_option("--component", synth.components, "freq:amp[:phase] for --fault custom");
  synth_cmd->add_option("--label", synth.label, "Fault label for --fault custom")->capture_default_str();
  synth_cmd->add_option("--fixtures", synth.fixtures, "Fixture CSV (default: built-in tables)");
  synth_cmd->add_option("--fs", synth.fs, "Sample rate, Hz")->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Number of samples")->capture_default_str();
  synth_cmd->add_option("--amp", synth.amp, "Fundamental amplitude")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Gaussian noise sigma")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output waveform file")->required();

  SidebandFlags sb;
  auto* sb_cmd = app.add_subcommand("sidebands", "Predict fault sideband frequencies");
  sb.slip.add(sb_cmd);
  sb_cmd->add_option("--k-max", sb.k_max, "Highest odd harmonic order")->capture_default_str();
  sb_cmd->add_option("--schedule", sb.schedule, "n1 | half")->capture_default_str();
  sb_cmd->add_flag("--broken-bar", sb.broken_bar, "Use f1 (1 +- 2 m s) instead");
  sb_cmd->add_option("--orders", sb.orders, "Broken-bar orders")->delimiter(',');
  sb_cmd->add_option("--match-case", sb.match_case, "Compare against a fixture table");
  sb_cmd->add_option("--tol", sb.tol, "Match tolerance, Hz")->capture_default_str();
  sb_cmd->add_option("--fixtures", sb.fixtures, "Fixture CSV (default: built-in tables)");
  sb_cmd->add_option("--out", sb.out, "Write CSV here instead of stdout");

  AnalyzeFlags an;
  auto* an_cmd = app.add_subcommand("analyze", "Spectrum and sideband features of a waveform");
  an_cmd->add_option("--in", an.in, "Input waveform (WFM-CSV)")->required();
  an_cmd->add_option("--window", an.window, "hann | rectangular")->capture_default_str();
  an_cmd->add_option("--grid-from", an.grid_from, "flags | fixture")->capture_default_str();
  an_cmd->add_option("--case", an.fixture_case, "Fixture case for --grid-from fixture")->capture_default_str();
  an_cmd->add_option("--fixtures", an.fixtures, "Fixture CSV (default: built-in tables)");
  an.slip.add(an_cmd);
  an_cmd->add_option("--k-max", an.k_max, "Highest odd harmonic order")->capture_default_str();
  an_cmd->add_option("--schedule", an.schedule, "n1 | half")->capture_default_str();
  an_cmd->add_option("--normalize", an.normalize, "none | by_fundamental")->capture_default_str();
  an_cmd->add_option("--estimator", an.estimator, "fit | peak")->capture_default_str();
  an_cmd->add_option("--n-fft", an.n_fft, "Zero-padded transform length");
  an_cmd->add_option("--out-prefix", an.out_prefix, "Prefix for output files")->required();

  DatasetFlags ds;
  auto* ds_cmd = app.add_subcommand("dataset", "Generate a labelled training set");
  ds_cmd->add_option("--per-case", ds.per_case, "Vectors per fault case")->capture_default_str();
  ds_cmd->add_option("--noise", ds.noise, "Gaussian noise sigma")->capture_default_str();
  ds_cmd->add_option("--seed", ds.seed, "Seed")->capture_default_str();
  ds_cmd->add_option("--fixtures", ds.fixtures, "Fixture CSV (default: built-in tables)");
  ds_cmd->add_option("--k-max", ds.k_max, "Highest odd harmonic order")->capture_default_str();
  ds_cmd->add_option("--schedule", ds.schedule, "n1 | half")->capture_default_str();
  ds_cmd->add_option("--fs", ds.fs, "Sample rate, Hz")->capture_default_str();
  ds_cmd->add_option("--n", ds.n, "Samples per waveform")->capture_default_str();
  ds_cmd->add_option("--out", ds.out, "Output dataset CSV")->required();

  TrainFlags tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the feed-forward classifier");
  tr_cmd->add_option("--data", tr.data, "Dataset CSV")->required();
  tr_cmd->add_option("--hidden", tr.hidden, "Hidden units")->capture_default_str();
  tr_cmd->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
  tr_cmd->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
  tr_cmd->add_option("--batch", tr.batch, "Mini-batch size")->capture_default_str();
  tr_cmd->add_option("--l2", tr.l2, "L2 weight decay")->capture_default_str();
  tr_cmd->add_option("--seed", tr.seed, "Seed for init, shuffling and split")->capture_default_str();
  tr_cmd->add_option("--activation", tr.activation, "sigmoid | tanh")->capture_default_str();
  tr_cmd->add_option("--holdout", tr.holdout, "Fraction held out for evaluation")->capture_default_str();
  tr_cmd->add_option("--out", tr.out, "Output model file")->required();
  tr_cmd->add_option("--loss-out", tr.loss_out, "Loss history CSV (default <out>.loss.csv)");

  ClassifyFlags cl;
  auto* cl_cmd = app.add_subcommand("classify", "Classify feature vectors with a trained model");
  cl_cmd->add_option("--model", cl.model, "Model file")->required();
  cl_cmd->add_option("--features", cl.features, "Feature CSV (dataset format)")->required();
  cl_cmd->add_option("--threshold", cl.threshold, "Reject threshold")->capture_default_str();

  DaqFlags enc, dec;
  auto* daq_cmd = app.add_subcommand("daq", "Acquisition-chain emulation");
  daq_cmd->require_subcommand(1);
  auto* enc_cmd = daq_cmd->add_subcommand("encode", "Waveform -> DAQ-CAP v1 capture");
  enc_cmd->add_option("--in", enc.in, "Input waveform (amps or rpm)")->required();
  enc_cmd->add_option("--channel", enc.channel, "current | speed")->capture_default_str();
  enc_cmd->add_option("--v-min", enc.v_min, "ADC low rail, V")->capture_default_str();
  enc_cmd->add_option("--v-max", enc.v_max, "ADC high rail, V")->capture_default_str();
  enc_cmd->add_option("--hold-rate", enc.hold_rate, "Sample-and-hold rate, Hz (default: input rate)");
  enc_cmd->add_option("--out", enc.out, "Output capture file")->required();
  auto* dec_cmd = daq_cmd->add_subcommand("decode", "DAQ-CAP v1 capture -> waveform");
  dec_cmd->add_option("--in", dec.in, "Input capture")->required();
  dec_cmd->add_option("--v-min", dec.v_min, "ADC low rail, V")->capture_default_str();
  dec_cmd->add_option("--v-max", dec.v_max, "ADC high rail, V")->capture_default_str();
  dec_cmd->add_flag("--physical", dec.physical, "Undo conditioning (amps / rpm instead of volts)");
  dec_cmd->add_option("--out", dec.out, "Output waveform file")->required();

  FixtureFlags fx;
  auto* fx_cmd = app.add_subcommand("fixtures", "Print or check the harmonic fixture tables");
  fx_cmd->add_option("--fixtures", fx.fixtures, "Fixture CSV (default: built-in tables)");
  fx_cmd->add_flag("--check", fx.check, "Validate and verify canonical round-trip");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth, *synth_cmd);
    if (*sb_cmd) return run_sidebands(sb, *sb_cmd);
    if (*an_cmd) return run_analyze(an, *an_cmd);
    if (*ds_cmd) return run_dataset(ds, *ds_cmd);
    if (*tr_cmd) return run_train(tr, *tr_cmd);
    if (*cl_cmd) return run_classify(cl, *cl_cmd);
    if (*enc_cmd) return run_daq_encode(enc, *enc_cmd);
    if (*dec_cmd) return run_daq_decode(dec, *dec_cmd);
    if (*fx_cmd) return run_fixtures(fx, *fx_cmd);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
