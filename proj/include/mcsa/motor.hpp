#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mcsa/fixtures.hpp"

namespace mcsa {

/// Nameplate and electrical constants of an induction motor.
///
/// The synchronous speed is tied to supply frequency and pole pairs
/// (ns = 60 f / p); construction rejects triples that disagree.
class MotorParams {
 public:
  MotorParams(int pole_pairs, double supply_freq_hz, double sync_speed_rpm, double rated_kw,
              double rated_current_a);

  /// Derives the synchronous speed from f and p.
  static MotorParams from_nameplate(int pole_pairs, double supply_freq_hz, double rated_kw,
                                    double rated_current_a);

  /// 2.2 kW, 50 Hz, 2-pole (p = 1), 3000 rpm test motor.
  static MotorParams lab_motor();

  int pole_pairs() const noexcept { return pole_pairs_; }
  double supply_freq_hz() const noexcept { return supply_freq_hz_; }
  double sync_speed_rpm() const noexcept { return sync_speed_rpm_; }
  double rated_kw() const noexcept { return rated_kw_; }
  double rated_current_a() const noexcept { return rated_current_a_; }

 private:
  int pole_pairs_;
  double supply_freq_hz_;
  double sync_speed_rpm_;
  double rated_kw_;
  double rated_current_a_;
};

struct SlipState {
  double rotor_speed_rpm = 0.0;
  double slip = 0.0;
  /// f2 = s * f1
  double slip_freq_hz = 0.0;
};

/// s = (ns - nr) / ns at full precision. Supersynchronous or negative
/// speeds throw DomainError.
SlipState compute_slip(const MotorParams& params, double rotor_speed_rpm);

/// Builds a SlipState from a given slip value instead of a measured speed,
/// e.g. the slip stored with a fixture table. Requires 0 <= slip <= 1.
SlipState slip_override(const MotorParams& params, double slip);

enum class FaultLabel { healthy, inter_turn_minor, inter_turn_severe, broken_bar };

std::string_view to_string(FaultLabel label);
FaultLabel parse_fault_label(std::string_view name);

struct FaultComponent {
  double freq_hz = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
};

/// Spectral components injected on top of the fundamental.
class FaultSignature {
 public:
  FaultSignature() = default;
  /// Throws ConfigError when a healthy label carries components or a
  /// component has a negative frequency or amplitude.
  FaultSignature(FaultLabel label, std::vector<FaultComponent> components);

  static FaultSignature healthy() { return {}; }

  FaultLabel label() const noexcept { return label_; }
  const std::vector<FaultComponent>& components() const noexcept { return components_; }

 private:
  FaultLabel label_ = FaultLabel::healthy;
  std::vector<FaultComponent> components_;
};

/// All (freq, amplitude) pairs of the case's table, phases zero.
/// ten_turns maps to inter_turn_minor, thirty_turns to inter_turn_severe.
FaultSignature fault_from_tables(FixtureCase case_id, const std::vector<FixtureTable>& fixtures);

/// Uniformly sampled real signal. Never empty.
class Waveform {
 public:
  Waveform(double sample_rate_hz, std::vector<double> samples);

  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

 private:
  double sample_rate_hz_;
  std::vector<double> samples_;
};

struct SynthesisConfig {
  double fundamental_amp = 1.0;
  double sample_rate_hz = 3250.0;
  std::size_t n_samples = 390;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// x[i] = A1 sin(2 pi f1 t) + sum_c a_c sin(2 pi f_c t + phi_c) + N(0, sigma^2),
/// t = i / fs. Components at or above Nyquist throw ConfigError naming the
/// component. Identical inputs give bit-identical output.
Waveform synthesize(const MotorParams& params, const FaultSignature& fault,
                    const SynthesisConfig& config);

// WFM-CSV: "# fs_hz=<decimal>" then one sample per line.
void write_waveform(std::ostream& out, const Waveform& w);
Waveform read_waveform(std::istream& in);

}  // namespace mcsa
