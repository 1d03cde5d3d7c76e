#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "mcsa/daq.hpp"
#include "mcsa/error.hpp"
#include "mcsa/spectrum.hpp"

using namespace mcsa;

TEST(Condition, SpeedChannel) {
  const auto chain = ConditioningChain::speed_chain();
  EXPECT_NEAR(condition(chain, 2800.0).volts, 168.0 / 18.0, 1e-12);
  EXPECT_NEAR(condition(chain, 2800.0).volts, 9.333, 5e-4);
  EXPECT_TRUE(condition(chain, 2800.0).out_of_range);
  EXPECT_EQ(condition(chain, 0.0).volts, 0.0);
}

TEST(Condition, CurrentChannelNetPositive) {
  const auto chain = ConditioningChain::current_chain();
  EXPECT_NEAR(condition(chain, 10.0).volts, 4.0, 1e-12);
  EXPECT_FALSE(condition(chain, 10.0).out_of_range);
  EXPECT_NEAR(uncondition(chain, 4.0), 10.0, 1e-12);
  ConditioningChain bad = chain;
  bad.burden_ohm = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SampleHold, IdentityAtInputRate) {
  const Waveform w(100.0, {0.1, 0.5, -0.2, 0.7});
  EXPECT_EQ(sample_hold(w, 100.0).samples(), w.samples());
}

TEST(SampleHold, RampGivesTwoPlateaus) {
  std::vector<double> ramp(10);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) / 9.0;
  const Waveform held = sample_hold(Waveform(10.0, ramp), 2.0);
  const auto& h = held.samples();
  EXPECT_EQ(std::set<double>(h.begin(), h.end()).size(), 2u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(h[i], ramp[0]);
  for (std::size_t i = 5; i < 10; ++i) EXPECT_EQ(h[i], ramp[5]);
  EXPECT_THROW(sample_hold(Waveform(10.0, ramp), 20.0), DomainError);
}

TEST(Quantize, Endpoints) {
  const AdcConfig cfg;
  EXPECT_EQ(quantize(cfg, 0.0), 0x00);
  EXPECT_EQ(quantize(cfg, 5.0), 0xFF);
  EXPECT_EQ(quantize(cfg, 2.5), 0x80);
}

TEST(Quantize, ClampCountsSaturation) {
  const AdcConfig cfg;
  std::size_t sat = 0;
  EXPECT_EQ(quantize(cfg, 7.2, sat), 0xFF);
  EXPECT_EQ(sat, 1u);
  EXPECT_EQ(quantize(cfg, -1.0, sat), 0x00);
  EXPECT_EQ(sat, 2u);
  EXPECT_EQ(quantize(cfg, 3.0, sat), quantize(cfg, 3.0));
  EXPECT_EQ(sat, 2u);
}

TEST(Quantize, MonotoneFullCoverageHalfLsbError) {
  const AdcConfig cfg;
  std::set<int> seen;
  int prev = -1;
  double worst = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double v = 5.0 * i / 100000.0;
    const int c = quantize(cfg, v);
    EXPECT_GE(c, prev);
    prev = c;
    seen.insert(c);
    worst = std::max(worst, std::abs(dequantize(cfg, static_cast<std::uint8_t>(c)) - v));
  }
  EXPECT_EQ(seen.size(), 256u);
  EXPECT_LE(worst, 5.0 / 510.0 + 1e-12);
}

TEST(Nibbles, SpecExamples) {
  auto [lo, hi] = encode_nibbles(0xFF);
  EXPECT_EQ(lo.s4_s6, 0b111);
  EXPECT_EQ(lo.s7, 0);
  EXPECT_EQ(hi.s4_s6, 0b111);
  EXPECT_EQ(hi.s7, 0);
  std::tie(lo, hi) = encode_nibbles(0x00);
  EXPECT_EQ(lo.s4_s6, 0);
  EXPECT_EQ(lo.s7, 1);
  EXPECT_EQ(hi.s7, 1);
  std::tie(lo, hi) = encode_nibbles(0xA5);
  EXPECT_FALSE(lo.select_high);
  EXPECT_TRUE(hi.select_high);
  EXPECT_EQ(lo.s4_s6, 0b101);
  EXPECT_EQ(lo.s7, 1);
  EXPECT_EQ(hi.s4_s6, 0b010);
  EXPECT_EQ(hi.s7, 0);
}

TEST(Nibbles, ExhaustiveRoundTrip) {
  for (int c = 0; c < 256; ++c) {
    const auto [lo, hi] = encode_nibbles(static_cast<std::uint8_t>(c));
    EXPECT_EQ(decode_nibbles(lo, hi), c);
  }
}

TEST(Nibbles, SwappedOrBadFlags) {
  const auto [lo, hi] = encode_nibbles(0x37);
  EXPECT_THROW(decode_nibbles(hi, lo), ProtocolError);
  NibbleRead wide = lo;
  wide.s4_s6 = 9;
  EXPECT_THROW(decode_nibbles(wide, hi), ProtocolError);
  EXPECT_THROW(decode_nibbles(lo, lo), ProtocolError);
}

TEST(Capture, ZeroWaveformIsAllZeroCodes) {
  const auto cap = capture(Waveform(3250.0, std::vector<double>(50, 0.0)), ConditioningChain::current_chain(), {},
                           channel_code(Channel::current));
  for (auto c : cap.codes) EXPECT_EQ(c, 0x00);
  EXPECT_EQ(cap.wire_trace.size(), 100u);
  EXPECT_EQ(cap.saturations, 0u);
}

TEST(Capture, FourVoltPeak) {
  // 10 A peak through the 10/4 CT and 1 ohm burden gives 4 V.
  std::vector<double> amps(390);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = 10.0 * std::sin(2.0 * std::numbers::pi * 50.0 * static_cast<double>(i) / 3250.0);
  }
  const auto cap =
      capture(Waveform(3250.0, amps), ConditioningChain::current_chain(), {}, channel_code(Channel::current));
  const auto top = *std::max_element(cap.codes.begin(), cap.codes.end());
  EXPECT_NEAR(top, 0xCC, 1);
  EXPECT_EQ(cap.decode_trace(), cap.codes);
}

TEST(Capture, ChannelMismatch) {
  const Waveform w(10.0, {1.0});
  EXPECT_THROW(capture(w, ConditioningChain::speed_chain(), {}, channel_code(Channel::current)), ConfigError);
  EXPECT_THROW(capture(w, ConditioningChain::current_chain(), {}, 4), ConfigError);
}

TEST(Capture, EndToEndToneWithinOneLsb) {
  // In-range tone: 2.5 V offset plus 2 V peak at the ADC input.
  std::vector<double> volts(390);
  for (std::size_t i = 0; i < volts.size(); ++i) {
    volts[i] = 2.5 + 2.0 * std::sin(2.0 * std::numbers::pi * 50.0 * static_cast<double>(i) / 3250.0);
  }
  // The current chain is unity gain at ct_ratio 1 and 1 ohm.
  ConditioningChain chain = ConditioningChain::current_chain();
  chain.ct_ratio = 1.0;
  const Waveform pre(3250.0, volts);
  const auto cap = capture(pre, chain, {}, channel_code(Channel::current));
  const Waveform back = decoded_volts(cap);
  const auto a = transform(pre, Window::rectangular).amplitudes[6];
  const auto b = transform(back, Window::rectangular).amplitudes[6];
  EXPECT_NEAR(b, a, AdcConfig{}.lsb_volts());
  for (std::size_t i = 0; i < volts.size(); ++i) EXPECT_LE(std::abs(back.samples()[i] - volts[i]), 5.0 / 510.0 + 1e-12);
}

TEST(CaptureFile, RoundTripsWireTrace) {
  std::vector<double> rpm{0.0, 500.0, 1200.0, 2800.0, 1800.0};
  const auto cap =
      capture(Waveform(1000.0, rpm), ConditioningChain::speed_chain(), {}, channel_code(Channel::speed));
  std::stringstream ss;
  write_capture(ss, cap);
  EXPECT_EQ(ss.str().rfind("# DAQ-CAP v1\n# channel=1\n# fs_hz=1000\n", 0), 0u);
  const auto back = read_capture(ss);
  EXPECT_EQ(back.codes, cap.codes);
  EXPECT_EQ(back.wire_trace, cap.wire_trace);
  EXPECT_EQ(back.channel_select, 1);
  EXPECT_EQ(back.sample_rate_hz, 1000.0);
}

TEST(CaptureFile, MalformedRowsReportLine) {
  const std::string head = "# DAQ-CAP v1\n# channel=0\n# fs_hz=10\n";
  std::istringstream mismatch(head + "00,0,1,0,1\nFF,0,1,0,1\n");
  try {
    read_capture(mismatch);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  std::istringstream short_row(head + "00,0,1\n");
  try {
    read_capture(short_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  std::istringstream no_magic("# channel=0\n# fs_hz=10\n00,0,1,0,1\n");
  EXPECT_THROW(read_capture(no_magic), ParseError);
}
