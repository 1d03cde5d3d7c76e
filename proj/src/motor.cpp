#include "mcsa/motor.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "mcsa/error.hpp"
#include "mcsa/random.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

MotorParams::MotorParams(int pole_pairs, double supply_freq_hz, double sync_speed_rpm,
                         double rated_kw, double rated_current_a)
    : pole_pairs_(pole_pairs),
      supply_freq_hz_(supply_freq_hz),
      sync_speed_rpm_(sync_speed_rpm),
      rated_kw_(rated_kw),
      rated_current_a_(rated_current_a) {
  if (pole_pairs < 1) throw ConfigError("pole_pairs must be >= 1");
  if (!positive_finite(supply_freq_hz)) throw ConfigError("supply_freq_hz must be positive");
  if (!positive_finite(sync_speed_rpm)) throw ConfigError("sync_speed_rpm must be positive");
  if (!positive_finite(rated_kw)) throw ConfigError("rated_kw must be positive");
  if (!positive_finite(rated_current_a)) throw ConfigError("rated_current_a must be positive");
  const double expected = 60.0 * supply_freq_hz / pole_pairs;
  if (std::abs(sync_speed_rpm - expected) > 1e-9 * expected) {
    throw ConfigError("sync_speed_rpm " + text::format_shortest(sync_speed_rpm) +
                      " inconsistent with 60*f/p = " + text::format_shortest(expected));
  }
}

MotorParams MotorParams::from_nameplate(int pole_pairs, double supply_freq_hz, double rated_kw,
                                        double rated_current_a) {
  if (pole_pairs < 1) throw ConfigError("pole_pairs must be >= 1");
  return MotorParams(pole_pairs, supply_freq_hz, 60.0 * supply_freq_hz / pole_pairs, rated_kw,
                     rated_current_a);
}

MotorParams MotorParams::lab_motor() { return MotorParams(1, 50.0, 3000.0, 2.2, 9.0); }

SlipState compute_slip(const MotorParams& params, double rotor_speed_rpm) {
  const double ns = params.sync_speed_rpm();
  if (!std::isfinite(rotor_speed_rpm) || rotor_speed_rpm < 0.0) {
    throw DomainError("rotor speed must be a nonnegative number of rpm");
  }
  if (rotor_speed_rpm > ns) {
    throw DomainError("rotor speed " + text::format_shortest(rotor_speed_rpm) +
                      " rpm exceeds synchronous speed " + text::format_shortest(ns) +
                      " rpm (supersynchronous operation is not supported)");
  }
  const double s = (ns - rotor_speed_rpm) / ns;
  return {rotor_speed_rpm, s, s * params.supply_freq_hz()};
}

SlipState slip_override(const MotorParams& params, double slip) {
  if (!(slip >= 0.0 && slip <= 1.0)) throw DomainError("slip must lie in [0, 1]");
  return {params.sync_speed_rpm() * (1.0 - slip), slip, slip * params.supply_freq_hz()};
}

std::string_view to_string(FaultLabel label) {
  switch (label) {
    case FaultLabel::healthy:
      return "healthy";
    case FaultLabel::inter_turn_minor:
      return "inter_turn_minor";
    case FaultLabel::inter_turn_severe:
      return "inter_turn_severe";
    case FaultLabel::broken_bar:
      return "broken_bar";
  }
  return "?";
}

FaultLabel parse_fault_label(std::string_view name) {
  for (auto l : {FaultLabel::healthy, FaultLabel::inter_turn_minor, FaultLabel::inter_turn_severe,
                 FaultLabel::broken_bar}) {
    if (to_string(l) == name) return l;
  }
  throw ParseError("unknown fault label '" + std::string(name) + "'", 0);
}

FaultSignature::FaultSignature(FaultLabel label, std::vector<FaultComponent> components)
    : label_(label), components_(std::move(components)) {
  if (label_ == FaultLabel::healthy && !components_.empty()) {
    throw ConfigError("a healthy signature cannot carry fault components");
  }
  for (const auto& c : components_) {
    if (!(c.freq_hz >= 0.0) || !(c.amplitude >= 0.0) || !std::isfinite(c.phase_rad)) {
      throw ConfigError("fault component needs freq >= 0, amplitude >= 0 and a finite phase");
    }
  }
}

FaultSignature fault_from_tables(FixtureCase case_id, const std::vector<FixtureTable>& fixtures) {
  const FixtureTable& table = find_fixture(fixtures, case_id);
  std::vector<FaultComponent> comps;
  comps.reserve(2 * table.rows.size());
  for (const auto& r : table.rows) {
    comps.push_back({r.pos_freq_hz, r.pos_amplitude, 0.0});
    comps.push_back({r.neg_freq_hz, r.neg_amplitude, 0.0});
  }
  const auto label =
      case_id == FixtureCase::ten_turns ? FaultLabel::inter_turn_minor : FaultLabel::inter_turn_severe;
  return FaultSignature(label, std::move(comps));
}

Waveform::Waveform(double sample_rate_hz, std::vector<double> samples)
    : sample_rate_hz_(sample_rate_hz), samples_(std::move(samples)) {
  if (!positive_finite(sample_rate_hz_)) throw DomainError("sample rate must be positive");
  if (samples_.empty()) throw DomainError("waveform must contain at least one sample");
}

Waveform synthesize(const MotorParams& params, const FaultSignature& fault,
                    const SynthesisConfig& config) {
  if (!positive_finite(config.sample_rate_hz)) throw ConfigError("sample rate must be positive");
  if (config.n_samples == 0) throw ConfigError("n_samples must be positive");
  if (!(config.fundamental_amp >= 0.0)) throw ConfigError("fundamental amplitude must be >= 0");
  if (!(config.noise_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");

  const double nyquist = config.sample_rate_hz / 2.0;
  const auto& comps = fault.components();
  std::size_t aliased = 0, worst = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (comps[c].freq_hz < nyquist) continue;
    if (aliased++ == 0 || comps[c].freq_hz > comps[worst].freq_hz) worst = c;
  }
  if (aliased > 0) {
    throw ConfigError("fault component " + std::to_string(worst) + " at " +
                      text::format_shortest(comps[worst].freq_hz) + " Hz aliases (" + std::to_string(aliased) +
                      " of " + std::to_string(comps.size()) + " components at or above Nyquist " +
                      text::format_shortest(nyquist) + " Hz for fs=" +
                      text::format_shortest(config.sample_rate_hz) + " Hz)");
  }
  if (params.supply_freq_hz() >= nyquist) {
    throw ConfigError("supply frequency " + text::format_shortest(params.supply_freq_hz()) +
                      " Hz is not below Nyquist " + text::format_shortest(nyquist) + " Hz");
  }

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double f1 = params.supply_freq_hz();
  std::vector<double> x(config.n_samples);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / config.sample_rate_hz;
    double v = config.fundamental_amp * std::sin(two_pi * f1 * t);
    for (const auto& c : comps) v += c.amplitude * std::sin(two_pi * c.freq_hz * t + c.phase_rad);
    x[i] = v;
  }
  if (config.noise_sigma > 0.0) {
    Rng rng(config.seed);
    for (auto& v : x) v += config.noise_sigma * rng.gaussian();
  }
  return Waveform(config.sample_rate_hz, std::move(x));
}

void write_waveform(std::ostream& out, const Waveform& w) {
  out << "# fs_hz=" << text::format_shortest(w.sample_rate_hz()) << '\n';
  for (double v : w.samples()) out << text::format_exact(v) << '\n';
}

Waveform read_waveform(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  double fs = 0.0;
  bool have_fs = false;
  std::vector<double> samples;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = text::trim(text::chomp(raw));
    if (s.empty()) continue;
    if (s.front() == '#') {
      const auto body = text::trim(s.substr(1));
      if (body.substr(0, 6) == "fs_hz=") {
        if (!text::parse_double(body.substr(6), fs) || !(fs > 0.0)) {
          throw ParseError("bad fs_hz header", line);
        }
        have_fs = true;
      }
      continue;
    }
    if (!have_fs) throw ParseError("sample before '# fs_hz=' header", line);
    double v = 0.0;
    if (!text::parse_double(s, v)) throw ParseError("bad sample '" + std::string(s) + "'", line);
    samples.push_back(v);
  }
  if (!have_fs) throw ParseError("missing '# fs_hz=' header", line);
  if (samples.empty()) throw ParseError("waveform file has no samples", line);
  return Waveform(fs, std::move(samples));
}

}  // namespace mcsa
