#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mcsa/motor.hpp"

namespace mcsa {

enum class Channel { current, speed };

std::string_view to_string(Channel c);
Channel parse_channel(std::string_view name);

/// Multiplexer select code (A,B lines) wired to each channel.
std::uint8_t channel_code(Channel c);

/// Analogue front end ahead of the multiplexer.
///
/// The current path runs CT -> burden -> inverting stage -> a second
/// inversion before the ADC, so its net polarity is positive in, positive
/// out. The speed path is tachometer -> resistive divider.
struct ConditioningChain {
  Channel channel = Channel::current;
  double ct_ratio = 10.0 / 4.0;
  double burden_ohm = 1.0;
  double speed_divider = 1.0 / 18.0;
  double tach_volts_per_rpm = 0.06;
  bool inverting = true;

  static ConditioningChain current_chain() { return {}; }
  static ConditioningChain speed_chain() {
    ConditioningChain c;
    c.channel = Channel::speed;
    c.inverting = false;
    return c;
  }

  /// Throws ConfigError unless every gain is positive and finite.
  void validate() const;
};

struct AdcConfig {
  int bits = 8;
  double v_min = 0.0;
  double v_max = 5.0;

  double lsb_volts() const { return (v_max - v_min) / 255.0; }
  /// Throws ConfigError unless bits == 8 and v_max > v_min.
  void validate() const;
};

struct Conditioned {
  double volts = 0.0;
  /// Outside [v_min, v_max] of the ADC; the ADC will clamp it.
  bool out_of_range = false;
};

/// Physical value (amps or rpm) to volts at the multiplexer input.
Conditioned condition(const ConditioningChain& chain, double physical_value,
                      const AdcConfig& adc = {});

/// Inverse of condition(): volts back to amps or rpm.
double uncondition(const ConditioningChain& chain, double volts);

/// Zero-order hold at hold_rate_hz, output kept at the input rate. Each
/// output sample repeats the input sample taken at the latest hold instant.
Waveform sample_hold(const Waveform& w, double hold_rate_hz);

/// round-half-up((clamp(v) - v_min) / (v_max - v_min) * 255). Inputs outside
/// the range (and NaN, which maps to 0x00) bump `saturations`.
std::uint8_t quantize(const AdcConfig& cfg, double volts);
std::uint8_t quantize(const AdcConfig& cfg, double volts, std::size_t& saturations);

/// Mid-tread reconstruction v_min + code * lsb.
double dequantize(const AdcConfig& cfg, std::uint8_t code);

/// One read of LPT status lines S4..S7 with D3 selecting the nibble.
struct NibbleRead {
  bool select_high = false;
  std::uint8_t s4_s6 = 0;  ///< nibble bits 0..2
  std::uint8_t s7 = 0;     ///< NOT nibble bit 3 (inverted on the wire)

  friend bool operator==(const NibbleRead&, const NibbleRead&) = default;
};

std::pair<NibbleRead, NibbleRead> encode_nibbles(std::uint8_t code);

/// Throws ProtocolError when the select flags are wrong or swapped, or a
/// field is wider than its wire.
std::uint8_t decode_nibbles(const NibbleRead& low, const NibbleRead& high);

struct DaqCapture {
  std::uint8_t channel_select = 0;
  double sample_rate_hz = 0.0;
  std::vector<std::uint8_t> codes;
  /// Two reads per code, low nibble first.
  std::vector<NibbleRead> wire_trace;
  std::size_t saturations = 0;

  /// Reassembles the codes from the wire trace.
  std::vector<std::uint8_t> decode_trace() const;
};

/// condition -> sample_hold -> quantize -> encode_nibbles for every sample.
/// `w` holds physical values (amps or rpm). channel_select must match the
/// chain's channel.
DaqCapture capture(const Waveform& w, const ConditioningChain& chain, const AdcConfig& cfg,
                   std::uint8_t channel_select, std::optional<double> hold_rate_hz = std::nullopt);

/// Volts at the ADC input reconstructed from the codes.
Waveform decoded_volts(const DaqCapture& cap, const AdcConfig& cfg = {});

// DAQ-CAP v1. Reading validates every row against its nibbles and reports
// the offending line in a ParseError / ProtocolError.
void write_capture(std::ostream& out, const DaqCapture& cap);
DaqCapture read_capture(std::istream& in);

}  // namespace mcsa
