#include "mcsa/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "mcsa/error.hpp"
#include "mcsa/random.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

std::string_view to_string(Normalize n) { return n == Normalize::none ? "none" : "by_fundamental"; }

Normalize parse_normalize(std::string_view name) {
  if (name == "none") return Normalize::none;
  if (name == "by_fundamental") return Normalize::by_fundamental;
  throw ParseError("unknown normalisation '" + std::string(name) + "'", 0);
}

std::string_view to_string(Estimator e) { return e == Estimator::peak ? "peak" : "fit"; }

Estimator parse_estimator(std::string_view name) {
  if (name == "peak") return Estimator::peak;
  if (name == "fit") return Estimator::fit;
  throw ParseError("unknown estimator '" + std::string(name) + "'", 0);
}

FeatureVector extract_features(const Spectrum& s, const SidebandGrid& grid,
                               const ExtractOptions& options) {
  for (const auto& e : grid.entries) {
    if (e.freq_hz >= s.nyquist_hz()) {
      throw DomainError("grid entry k=" + std::to_string(e.k) + " " + std::string(to_string(e.branch)) +
                        " at " + text::format_shortest(e.freq_hz) +
                        " Hz is not below the spectrum's Nyquist " + text::format_shortest(s.nyquist_hz()) +
                        " Hz");
    }
  }
  const bool normalise = options.normalize == Normalize::by_fundamental;

  FeatureVector fv;
  fv.layout.reserve(grid.entries.size());
  for (const auto& e : grid.entries) fv.layout.push_back({e.k, e.branch});

  double fundamental = 1.0;
  if (options.estimator == Estimator::peak) {
    for (const auto& e : grid.entries) {
      fv.values.push_back(measure_peak(s, e.freq_hz, options.half_width_bins).amplitude);
    }
    if (normalise) fundamental = measure_peak(s, grid.supply_freq_hz, options.half_width_bins).amplitude;
  } else {
    std::vector<double> targets;
    targets.reserve(grid.entries.size() + 1);
    for (const auto& e : grid.entries) targets.push_back(e.freq_hz);
    if (normalise) targets.push_back(grid.supply_freq_hz);
    auto amps = fit_amplitudes(s, targets, options.half_width_bins);
    if (normalise) {
      fundamental = amps.back();
      amps.pop_back();
    }
    fv.values = std::move(amps);
  }

  if (normalise) {
    for (auto& v : fv.values) v = fundamental > 0.0 ? v / fundamental : 0.0;
  }
  return fv;
}

SidebandGrid grid_from_fixture(const FixtureTable& table) {
  SidebandGrid g;
  g.case_label = std::string(to_string(table.case_id));
  g.slip = table.meta.slip;
  g.pole_pairs = table.meta.pole_pairs;
  g.supply_freq_hz = table.meta.supply_freq_hz;
  std::vector<FixtureRow> rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  for (const auto& r : rows) {
    SidebandEntry pos;
    pos.k = r.k;
    pos.n = 0;
    pos.branch = Branch::positive;
    pos.freq_hz = r.pos_freq_hz;
    pos.amplitude = r.pos_amplitude;
    SidebandEntry neg = pos;
    neg.branch = Branch::negative;
    neg.freq_hz = r.neg_freq_hz;
    neg.amplitude = r.neg_amplitude;
    g.entries.push_back(pos);
    g.entries.push_back(neg);
  }
  return g;
}

std::vector<FeatureVector> build_dataset(const std::vector<DatasetCase>& cases, int per_case,
                                         double noise_sigma, std::uint64_t seed,
                                         const DatasetConfig& config) {
  if (per_case < 1) throw ConfigError("per_case must be at least 1");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");

  std::vector<FeatureVector> out;
  out.reserve(cases.size() * static_cast<std::size_t>(per_case));
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& dc = cases[c];
    const SidebandGrid grid =
        flux_harmonics(dc.slip.slip, config.motor.pole_pairs(), config.motor.supply_freq_hz(),
                       config.k_values, config.schedule);
    for (int j = 0; j < per_case; ++j) {
      SynthesisConfig sc;
      sc.fundamental_amp = config.fundamental_amp;
      sc.sample_rate_hz = config.sample_rate_hz;
      sc.n_samples = config.n_samples;
      sc.noise_sigma = noise_sigma;
      sc.seed = derive_seed(seed, c, static_cast<std::uint64_t>(j));
      const Waveform w = synthesize(config.motor, dc.fault, sc);
      FeatureVector fv = extract_features(transform(w, config.window), grid, config.extract);
      fv.label = dc.fault.label();
      out.push_back(std::move(fv));
    }
  }
  return out;
}

std::vector<DatasetCase> default_cases(const std::vector<FixtureTable>& fixtures,
                                       const MotorParams& motor) {
  const auto& ten = find_fixture(fixtures, FixtureCase::ten_turns);
  const auto& thirty = find_fixture(fixtures, FixtureCase::thirty_turns);
  return {
      {FaultSignature::healthy(), compute_slip(motor, 2650.0)},
      {fault_from_tables(FixtureCase::ten_turns, fixtures), slip_override(motor, ten.meta.slip)},
      {fault_from_tables(FixtureCase::thirty_turns, fixtures), slip_override(motor, thirty.meta.slip)},
  };
}

std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> split_holdout(
    const std::vector<FeatureVector>& data, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("holdout fraction must lie in [0, 1)");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5B117));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  const auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
  std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i + held < order.size() ? out.first : out.second).push_back(data[order[i]]);
  }
  return out;
}

std::string layout_string(const std::vector<FeatureSlot>& layout) {
  std::string s;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(layout[i].k);
    s += layout[i].branch == Branch::positive ? 'p' : 'n';
  }
  return s;
}

namespace {

std::vector<FeatureSlot> parse_layout(std::string_view s, std::size_t line) {
  std::vector<FeatureSlot> layout;
  if (s.empty()) return layout;
  for (auto tok : text::split(s, ';')) {
    tok = text::trim(tok);
    if (tok.size() < 2) throw ParseError("bad layout token '" + std::string(tok) + "'", line);
    const char b = tok.back();
    long long k = 0;
    if ((b != 'p' && b != 'n') || !text::parse_int(tok.substr(0, tok.size() - 1), k) || k < 1) {
      throw ParseError("bad layout token '" + std::string(tok) + "'", line);
    }
    layout.push_back({static_cast<int>(k), b == 'p' ? Branch::positive : Branch::negative});
  }
  return layout;
}

}  // namespace

void write_dataset(std::ostream& out, const std::vector<FeatureVector>& data) {
  const std::vector<FeatureSlot> layout = data.empty() ? std::vector<FeatureSlot>{} : data.front().layout;
  for (const auto& fv : data) {
    if (fv.layout != layout) throw ValidationError("dataset vectors have differing layouts");
  }
  out << "# layout=" << layout_string(layout) << '\n';
  out << "label";
  for (std::size_t i = 0; i < layout.size(); ++i) out << ",v" << i + 1;
  out << '\n';
  for (const auto& fv : data) {
    out << (fv.label ? to_string(*fv.label) : std::string_view{});
    for (double v : fv.values) out << ',' << text::format_exact(v);
    out << '\n';
  }
}

std::vector<FeatureVector> read_dataset(std::istream& in) {
  std::vector<FeatureVector> data;
  std::vector<FeatureSlot> layout;
  bool have_layout = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = text::trim(text::chomp(raw));
    if (s.empty()) continue;
    if (s.front() == '#') {
      const auto body = text::trim(s.substr(1));
      if (body.substr(0, 7) == "layout=") {
        layout = parse_layout(text::trim(body.substr(7)), line);
        have_layout = true;
      }
      continue;
    }
    if (s.substr(0, 6) == "label,") continue;
    if (!have_layout) throw ParseError("row before '# layout=' header", line);
    const auto fields = text::split(s, ',');
    if (fields.size() != layout.size() + 1) {
      throw ParseError("expected " + std::to_string(layout.size()) + " feature values, got " +
                           std::to_string(fields.size() - 1),
                       line);
    }
    FeatureVector fv;
    fv.layout = layout;
    const auto label = text::trim(fields[0]);
    if (!label.empty()) {
      try {
        fv.label = parse_fault_label(label);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
      }
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!text::parse_double(fields[i], v)) {
        throw ParseError("bad feature value '" + std::string(fields[i]) + "'", line);
      }
      fv.values.push_back(v);
    }
    data.push_back(std::move(fv));
  }
  if (!have_layout) throw ParseError("missing '# layout=' header", line);
  return data;
}

}  // namespace mcsa
