#include "mcsa/daq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "mcsa/error.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

constexpr std::string_view kCaptureMagic = "# DAQ-CAP v1";

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Net sign of the current path: the inverting stage and the compensating
// inversion ahead of the ADC cancel.
double current_polarity(const ConditioningChain& chain) {
  double sign = 1.0;
  if (chain.inverting) {
    sign = -sign;  // inverting amplifier after the burden resistor
    sign = -sign;  // re-inversion so the ADC sees positive polarity
  }
  return sign;
}

}  // namespace

std::string_view to_string(Channel c) { return c == Channel::current ? "current" : "speed"; }

Channel parse_channel(std::string_view name) {
  if (name == "current") return Channel::current;
  if (name == "speed") return Channel::speed;
  throw ParseError("unknown channel '" + std::string(name) + "'", 0);
}

std::uint8_t channel_code(Channel c) { return c == Channel::current ? 0b00 : 0b01; }

void ConditioningChain::validate() const {
  if (!positive_finite(ct_ratio) || !positive_finite(burden_ohm) || !positive_finite(speed_divider) ||
      !positive_finite(tach_volts_per_rpm)) {
    throw ConfigError("conditioning gains must be positive");
  }
}

void AdcConfig::validate() const {
  if (bits != 8) throw ConfigError("only the 8-bit conversion mode is emulated");
  if (!(std::isfinite(v_min) && std::isfinite(v_max) && v_max > v_min)) {
    throw ConfigError("ADC range needs v_max > v_min");
  }
}

Conditioned condition(const ConditioningChain& chain, double physical_value, const AdcConfig& adc) {
  chain.validate();
  Conditioned out;
  if (chain.channel == Channel::speed) {
    out.volts = physical_value * chain.tach_volts_per_rpm * chain.speed_divider;
  } else {
    out.volts = current_polarity(chain) * physical_value / chain.ct_ratio * chain.burden_ohm;
  }
  out.out_of_range = !(out.volts >= adc.v_min && out.volts <= adc.v_max);
  return out;
}

double uncondition(const ConditioningChain& chain, double volts) {
  chain.validate();
  if (chain.channel == Channel::speed) return volts / (chain.tach_volts_per_rpm * chain.speed_divider);
  return current_polarity(chain) * volts * chain.ct_ratio / chain.burden_ohm;
}

Waveform sample_hold(const Waveform& w, double hold_rate_hz) {
  const double rate = w.sample_rate_hz();
  if (!positive_finite(hold_rate_hz)) throw DomainError("hold rate must be positive");
  if (hold_rate_hz > rate) {
    throw DomainError("hold rate " + text::format_shortest(hold_rate_hz) + " Hz exceeds the input rate " +
                      text::format_shortest(rate) + " Hz");
  }
  const auto& in = w.samples();
  std::vector<double> out(in.size());
  const double ratio = hold_rate_hz / rate;
  for (std::size_t i = 0; i < in.size(); ++i) {
    // Index of the latest hold instant m / hold_rate, then the input sample
    // at or after it. The epsilon absorbs products like 4.9999999.
    const double m = std::floor(static_cast<double>(i) * ratio + 1e-9);
    auto j = static_cast<std::size_t>(std::ceil(m / ratio - 1e-9));
    if (j > i) j = i;
    out[i] = in[j];
  }
  return Waveform(rate, std::move(out));
}

std::uint8_t quantize(const AdcConfig& cfg, double volts, std::size_t& saturations) {
  cfg.validate();
  if (std::isnan(volts)) {
    ++saturations;
    return 0x00;
  }
  if (volts < cfg.v_min || volts > cfg.v_max) ++saturations;
  const double clamped = std::clamp(volts, cfg.v_min, cfg.v_max);
  const double scaled = (clamped - cfg.v_min) / (cfg.v_max - cfg.v_min) * 255.0;
  return static_cast<std::uint8_t>(std::min(255.0, std::floor(scaled + 0.5)));
}

std::uint8_t quantize(const AdcConfig& cfg, double volts) {
  std::size_t ignored = 0;
  return quantize(cfg, volts, ignored);
}

double dequantize(const AdcConfig& cfg, std::uint8_t code) {
  return cfg.v_min + static_cast<double>(code) * cfg.lsb_volts();
}

std::pair<NibbleRead, NibbleRead> encode_nibbles(std::uint8_t code) {
  const auto nibble = [](std::uint8_t n, bool high) {
    NibbleRead r;
    r.select_high = high;
    r.s4_s6 = n & 0x7;
    r.s7 = ((n >> 3) & 0x1) ^ 0x1;
    return r;
  };
  return {nibble(code & 0x0F, false), nibble(code >> 4, true)};
}

std::uint8_t decode_nibbles(const NibbleRead& low, const NibbleRead& high) {
  if (low.select_high || !high.select_high) {
    throw ProtocolError(low.select_high && !high.select_high
                            ? "nibble reads swapped: high nibble arrived first"
                            : "nibble read has the wrong D3 select state");
  }
  for (const auto* r : {&low, &high}) {
    if (r->s4_s6 > 0x7 || r->s7 > 0x1) throw ProtocolError("nibble read wider than the S4..S7 lines");
  }
  const auto nibble = [](const NibbleRead& r) {
    return static_cast<std::uint8_t>(r.s4_s6 | ((r.s7 ^ 0x1) << 3));
  };
  return static_cast<std::uint8_t>(nibble(low) | (nibble(high) << 4));
}

std::vector<std::uint8_t> DaqCapture::decode_trace() const {
  if (wire_trace.size() % 2 != 0) throw ProtocolError("wire trace has an odd number of reads");
  std::vector<std::uint8_t> out;
  out.reserve(wire_trace.size() / 2);
  for (std::size_t i = 0; i < wire_trace.size(); i += 2) {
    out.push_back(decode_nibbles(wire_trace[i], wire_trace[i + 1]));
  }
  return out;
}

DaqCapture capture(const Waveform& w, const ConditioningChain& chain, const AdcConfig& cfg,
                   std::uint8_t channel_select, std::optional<double> hold_rate_hz) {
  chain.validate();
  cfg.validate();
  if (channel_select > 0b11) throw ConfigError("channel select is a 2-bit code");
  if (channel_select != channel_code(chain.channel)) {
    throw ConfigError("channel select " + std::to_string(channel_select) + " is not wired to the " +
                      std::string(to_string(chain.channel)) + " conditioning chain (expects " +
                      std::to_string(channel_code(chain.channel)) + ")");
  }

  std::vector<double> volts(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) volts[i] = condition(chain, w.samples()[i], cfg).volts;
  const Waveform held = sample_hold(Waveform(w.sample_rate_hz(), std::move(volts)),
                                    hold_rate_hz.value_or(w.sample_rate_hz()));

  DaqCapture cap;
  cap.channel_select = channel_select;
  cap.sample_rate_hz = w.sample_rate_hz();
  cap.codes.reserve(held.size());
  cap.wire_trace.reserve(2 * held.size());
  for (double v : held.samples()) {
    const std::uint8_t code = quantize(cfg, v, cap.saturations);
    const auto [low, high] = encode_nibbles(code);
    cap.codes.push_back(code);
    cap.wire_trace.push_back(low);
    cap.wire_trace.push_back(high);
  }
  return cap;
}

Waveform decoded_volts(const DaqCapture& cap, const AdcConfig& cfg) {
  const auto codes = cap.decode_trace();
  std::vector<double> v(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) v[i] = dequantize(cfg, codes[i]);
  return Waveform(cap.sample_rate_hz, std::move(v));
}

void write_capture(std::ostream& out, const DaqCapture& cap) {
  if (cap.wire_trace.size() != 2 * cap.codes.size()) {
    throw ProtocolError("wire trace length must be twice the code count");
  }
  out << kCaptureMagic << '\n';
  out << "# channel=" << static_cast<int>(cap.channel_select) << '\n';
  out << "# fs_hz=" << text::format_shortest(cap.sample_rate_hz) << '\n';
  char hex[3];
  for (std::size_t i = 0; i < cap.codes.size(); ++i) {
    const auto& lo = cap.wire_trace[2 * i];
    const auto& hi = cap.wire_trace[2 * i + 1];
    std::snprintf(hex, sizeof hex, "%02X", cap.codes[i]);
    out << hex << ',' << static_cast<int>(lo.s4_s6) << ',' << static_cast<int>(lo.s7) << ','
        << static_cast<int>(hi.s4_s6) << ',' << static_cast<int>(hi.s7) << '\n';
  }
}

DaqCapture read_capture(std::istream& in) {
  DaqCapture cap;
  std::string raw;
  std::size_t line = 0;
  bool magic = false, have_channel = false, have_fs = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = text::trim(text::chomp(raw));
    if (s.empty()) continue;
    if (s.front() == '#') {
      if (s == kCaptureMagic) {
        magic = true;
        continue;
      }
      const auto body = text::trim(s.substr(1));
      if (body.substr(0, 8) == "channel=") {
        long long ch = 0;
        if (!text::parse_int(body.substr(8), ch) || ch < 0 || ch > 3) {
          throw ParseError("channel must be a 2-bit code", line);
        }
        cap.channel_select = static_cast<std::uint8_t>(ch);
        have_channel = true;
      } else if (body.substr(0, 6) == "fs_hz=") {
        if (!text::parse_double(body.substr(6), cap.sample_rate_hz) || !(cap.sample_rate_hz > 0.0)) {
          throw ParseError("bad fs_hz header", line);
        }
        have_fs = true;
      }
      continue;
    }
    if (!magic) throw ParseError("missing '# DAQ-CAP v1' header", line);
    if (!have_channel || !have_fs) throw ParseError("sample row before channel/fs_hz headers", line);
    const auto f = text::split(s, ',');
    if (f.size() != 5) throw ParseError("expected code_hex,low_s4s6,low_s7,high_s4s6,high_s7", line);
    const auto hex = text::trim(f[0]);
    unsigned code = 0;
    if (hex.size() != 2 || std::sscanf(std::string(hex).c_str(), "%2x", &code) != 1 ||
        hex.find_first_not_of("0123456789abcdefABCDEF") != std::string_view::npos) {
      throw ParseError("bad code '" + std::string(hex) + "'", line);
    }
    long long v[4];
    for (int i = 0; i < 4; ++i) {
      if (!text::parse_int(f[static_cast<std::size_t>(i) + 1], v[i]) || v[i] < 0 || v[i] > 255) {
        throw ParseError("bad nibble field '" + std::string(f[static_cast<std::size_t>(i) + 1]) + "'", line);
      }
    }
    NibbleRead lo{false, static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1])};
    NibbleRead hi{true, static_cast<std::uint8_t>(v[2]), static_cast<std::uint8_t>(v[3])};
    std::uint8_t decoded = 0;
    try {
      decoded = decode_nibbles(lo, hi);
    } catch (const ProtocolError& e) {
      throw ProtocolError(e.what(), line);
    }
    if (decoded != code) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "wire nibbles decode to %02X but the row records %02X", decoded, code);
      throw ProtocolError(buf, line);
    }
    cap.codes.push_back(static_cast<std::uint8_t>(code));
    cap.wire_trace.push_back(lo);
    cap.wire_trace.push_back(hi);
  }
  if (!magic) throw ParseError("missing '# DAQ-CAP v1' header", line);
  if (cap.codes.empty()) throw ParseError("capture has no samples", line);
  return cap;
}

}  // namespace mcsa
