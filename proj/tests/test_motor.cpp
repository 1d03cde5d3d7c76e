#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dft_oracle.hpp"
#include "mcsa/error.hpp"
#include "mcsa/fixtures.hpp"
#include "mcsa/motor.hpp"

using namespace mcsa;

namespace {

MotorParams motor_3000() { return MotorParams(1, 50.0, 3000.0, 2.2, 9.0); }

}  // namespace

TEST(MotorParams, RejectsInconsistentSyncSpeed) {
  EXPECT_THROW(MotorParams(1, 50.0, 1500.0, 2.2, 9.0), ConfigError);
  EXPECT_THROW(MotorParams(0, 50.0, 3000.0, 2.2, 9.0), ConfigError);
  EXPECT_NO_THROW(MotorParams(2, 50.0, 1500.0, 2.2, 9.0));
  EXPECT_DOUBLE_EQ(MotorParams::from_nameplate(2, 60.0, 1.0, 1.0).sync_speed_rpm(), 1800.0);
}

TEST(Slip, At2500Rpm) {
  const SlipState s = compute_slip(motor_3000(), 2500.0);
  EXPECT_NEAR(s.slip, 0.16667, 5e-6);
  EXPECT_NEAR(s.slip_freq_hz, 8.333, 5e-4);
  EXPECT_EQ(s.rotor_speed_rpm, 2500.0);
}

TEST(Slip, SynchronousIsZero) {
  const SlipState s = compute_slip(motor_3000(), 3000.0);
  EXPECT_EQ(s.slip, 0.0);
  EXPECT_EQ(s.slip_freq_hz, 0.0);
}

TEST(Slip, At2650RpmUsesTheFormula) {
  EXPECT_NEAR(compute_slip(motor_3000(), 2650.0).slip, 0.11667, 5e-6);
}

TEST(Slip, RejectsSupersynchronousAndNegative) {
  EXPECT_THROW(compute_slip(motor_3000(), 3000.5), DomainError);
  EXPECT_THROW(compute_slip(motor_3000(), -1.0), DomainError);
}

TEST(Slip, MonotoneDecreasingInSpeed) {
  double prev = 2.0;
  for (double nr = 0.0; nr <= 3000.0; nr += 125.0) {
    const double s = compute_slip(motor_3000(), nr).slip;
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Slip, OverrideKeepsGivenValue) {
  const SlipState s = slip_override(motor_3000(), 0.133);
  EXPECT_EQ(s.slip, 0.133);
  EXPECT_DOUBLE_EQ(s.slip_freq_hz, 6.65);
  EXPECT_THROW(slip_override(motor_3000(), 1.5), DomainError);
}

TEST(FaultSignature, HealthyHasNoComponents) {
  EXPECT_THROW(FaultSignature(FaultLabel::healthy, {{50.0, 1.0, 0.0}}), ConfigError);
  EXPECT_THROW(FaultSignature(FaultLabel::broken_bar, {{-1.0, 1.0, 0.0}}), ConfigError);
  EXPECT_TRUE(FaultSignature::healthy().components().empty());
}

TEST(FaultSignature, FromTables) {
  const auto tables = builtin_fixtures();
  const auto has = [](const FaultSignature& f, double hz, double amp) {
    return std::any_of(f.components().begin(), f.components().end(), [&](const FaultComponent& c) {
      return c.freq_hz == hz && c.amplitude == amp && c.phase_rad == 0.0;
    });
  };
  const FaultSignature thirty = fault_from_tables(FixtureCase::thirty_turns, tables);
  EXPECT_EQ(thirty.label(), FaultLabel::inter_turn_severe);
  EXPECT_EQ(thirty.components().size(), 22u);
  EXPECT_TRUE(has(thirty, 92.0, 0.1312));
  EXPECT_TRUE(has(thirty, 8.0, 0.396));

  const FaultSignature ten = fault_from_tables(FixtureCase::ten_turns, tables);
  EXPECT_EQ(ten.label(), FaultLabel::inter_turn_minor);
  EXPECT_TRUE(has(ten, 6.0, 0.323));
  EXPECT_TRUE(has(ten, 94.0, 0.01288));

  EXPECT_THROW(fault_from_tables(FixtureCase::ten_turns, {}), NotFoundError);
}

TEST(Synthesize, HealthyIsSixCyclesOfTheFundamental) {
  const Waveform w = synthesize(motor_3000(), FaultSignature::healthy(), {});
  ASSERT_EQ(w.size(), 390u);
  EXPECT_EQ(w.sample_rate_hz(), 3250.0);
  EXPECT_DOUBLE_EQ(w.duration_s(), 0.12);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(w.samples()[i], std::sin(2.0 * std::numbers::pi * 50.0 * static_cast<double>(i) / 3250.0), 1e-12);
  }
}

TEST(Synthesize, ZeroAmplitudeIsSilent) {
  SynthesisConfig cfg;
  cfg.fundamental_amp = 0.0;
  const Waveform w = synthesize(motor_3000(), FaultSignature::healthy(), cfg);
  for (double v : w.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Synthesize, SingleSidebandShowsTwoPeaks) {
  // 91.67 Hz is off-bin at 8.333 Hz resolution; pick a length that puts it
  // on a bin so the oracle spectrum has exactly two lines.
  SynthesisConfig cfg;
  cfg.n_samples = 3900;  // 0.8333 Hz bins; 91.6667 Hz is bin 110
  const FaultSignature f(FaultLabel::inter_turn_severe, {{275.0 / 3.0, 0.13, 0.0}});
  const Waveform w = synthesize(motor_3000(), f, cfg);
  const auto X = oracle::direct_dft_real(w.samples());
  std::vector<std::size_t> peaks;
  for (std::size_t j = 1; j < w.size() / 2; ++j) {
    if (2.0 * std::abs(X[j]) / static_cast<double>(w.size()) > 1e-6) peaks.push_back(j);
  }
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_EQ(peaks[0], 60u);
  EXPECT_EQ(peaks[1], 110u);
  EXPECT_NEAR(2.0 * std::abs(X[110]) / 3900.0, 0.13, 1e-9);
}

TEST(Synthesize, RejectsAliasingNamingTheComponent) {
  SynthesisConfig cfg;
  cfg.sample_rate_hz = 100.0;
  try {
    synthesize(motor_3000(), fault_from_tables(FixtureCase::thirty_turns, builtin_fixtures()), cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("1092 Hz"), std::string::npos) << e.what();
  }
}

TEST(Synthesize, SeededNoiseIsReproducible) {
  SynthesisConfig cfg;
  cfg.noise_sigma = 0.05;
  cfg.seed = 11;
  const auto f = fault_from_tables(FixtureCase::ten_turns, builtin_fixtures());
  const Waveform a = synthesize(motor_3000(), f, cfg);
  const Waveform b = synthesize(motor_3000(), f, cfg);
  EXPECT_EQ(a.samples(), b.samples());
  cfg.seed = 12;
  EXPECT_NE(a.samples(), synthesize(motor_3000(), f, cfg).samples());
}

TEST(Synthesize, TriangleBound) {
  const auto f = fault_from_tables(FixtureCase::thirty_turns, builtin_fixtures());
  double bound = 1.0;
  for (const auto& c : f.components()) bound += c.amplitude;
  const Waveform w = synthesize(motor_3000(), f, {});
  for (double v : w.samples()) EXPECT_LE(std::abs(v), bound + 1e-12);
}

TEST(WaveformFile, RoundTripsExactly) {
  SynthesisConfig cfg;
  cfg.noise_sigma = 0.1;
  const Waveform w = synthesize(motor_3000(), FaultSignature::healthy(), cfg);
  std::stringstream ss;
  write_waveform(ss, w);
  EXPECT_EQ(ss.str().rfind("# fs_hz=3250\n", 0), 0u);
  const Waveform back = read_waveform(ss);
  EXPECT_EQ(back.sample_rate_hz(), w.sample_rate_hz());
  EXPECT_EQ(back.samples(), w.samples());
}

TEST(WaveformFile, RejectsMissingHeaderAndEmpty) {
  std::istringstream no_header("1\n2\n");
  EXPECT_THROW(read_waveform(no_header), Error);
  std::istringstream empty("# fs_hz=10\n");
  EXPECT_THROW(read_waveform(empty), Error);
  EXPECT_THROW(Waveform(0.0, {1.0}), DomainError);
  EXPECT_THROW(Waveform(1.0, {}), DomainError);
}
