#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "mcsa/error.hpp"
#include "mcsa/features.hpp"
#include "mcsa/fixtures.hpp"

using namespace mcsa;

namespace {

Waveform synth(const FaultSignature& f, std::size_t n = 390, double amp = 1.0, double sigma = 0.0) {
  SynthesisConfig cfg;
  cfg.n_samples = n;
  cfg.fundamental_amp = amp;
  cfg.noise_sigma = sigma;
  cfg.seed = 3;
  return synthesize(MotorParams::lab_motor(), f, cfg);
}

SidebandGrid default_grid(double slip) {
  const int k[] = {1, 3, 5, 7, 9};
  return flux_harmonics(slip, 1, 50.0, k, NSchedule::fixed_one);
}

}  // namespace

TEST(ExtractFeatures, HealthyIsZero) {
  const Spectrum s = transform(synth(FaultSignature::healthy()));
  ExtractOptions opts;
  opts.normalize = Normalize::none;
  for (auto est : {Estimator::fit, Estimator::peak}) {
    opts.estimator = est;
    const auto fv = extract_features(s, default_grid(0.133), opts);
    ASSERT_EQ(fv.values.size(), 10u);
    // Hann leakage of the fundamental stays below 1e-12 beyond two bins.
    for (double v : fv.values) EXPECT_LT(v, 1e-9);
  }
}

TEST(ExtractFeatures, HealthyWithNoiseStaysNearFloor) {
  constexpr double sigma = 0.02;
  const Spectrum s = transform(synth(FaultSignature::healthy(), 390, 1.0, sigma));
  ExtractOptions opts;
  opts.normalize = Normalize::none;
  const auto fv = extract_features(s, default_grid(0.133), opts);
  // Per-bin noise amplitude is about sigma * sqrt(4 * 1.5 / N) for Hann.
  const double floor = sigma * std::sqrt(6.0 / 390.0);
  for (double v : fv.values) EXPECT_LT(v, 3.0 * floor * 1.5);
}

TEST(ExtractFeatures, ThirtyTurnsRecoversFixtureAmplitudes) {
  const auto tables = builtin_fixtures();
  const auto& table = find_fixture(tables, FixtureCase::thirty_turns);
  const Spectrum s = transform(synth(fault_from_tables(FixtureCase::thirty_turns, tables), 3900));
  ExtractOptions opts;
  opts.normalize = Normalize::none;
  const SidebandGrid grid = grid_from_fixture(table);
  const auto fv = extract_features(s, grid, opts);
  ASSERT_EQ(fv.values.size(), 22u);
  for (std::size_t i = 0; i < grid.entries.size(); ++i) {
    EXPECT_NEAR(fv.values[i], *grid.entries[i].amplitude, 0.05 * *grid.entries[i].amplitude)
        << "k=" << grid.entries[i].k << " " << to_string(grid.entries[i].branch);
  }
}

TEST(ExtractFeatures, NormalizedIsScaleInvariant) {
  const auto f = fault_from_tables(FixtureCase::ten_turns, builtin_fixtures());
  std::vector<double> scaled = synth(f).samples();
  for (auto& v : scaled) v *= 2.0;
  const auto a = extract_features(transform(synth(f)), default_grid(0.133));
  const auto b = extract_features(transform(Waveform(3250.0, scaled)), default_grid(0.133));
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
}

TEST(ExtractFeatures, ZeroFundamentalGivesZeros) {
  const auto fv = extract_features(transform(Waveform(3250.0, std::vector<double>(390, 0.0))), default_grid(0.133));
  for (double v : fv.values) EXPECT_EQ(v, 0.0);
}

TEST(ExtractFeatures, LayoutMirrorsGrid) {
  const auto fv = extract_features(transform(synth(FaultSignature::healthy())), default_grid(0.133));
  EXPECT_EQ(layout_string(fv.layout), "1p;1n;3p;3n;5p;5n;7p;7n;9p;9n");
}

TEST(ExtractFeatures, GridAboveNyquist) {
  const auto s = transform(synth(FaultSignature::healthy()));
  const int k[] = {41};
  EXPECT_THROW(extract_features(s, flux_harmonics(0.1, 1, 50.0, k, NSchedule::fixed_one)), DomainError);
}

TEST(Dataset, CountsAndLabels) {
  const auto data = build_dataset(default_cases(builtin_fixtures()), 100, 0.02, 7);
  ASSERT_EQ(data.size(), 300u);
  std::map<FaultLabel, int> counts;
  for (const auto& fv : data) ++counts[*fv.label];
  EXPECT_EQ(counts[FaultLabel::healthy], 100);
  EXPECT_EQ(counts[FaultLabel::inter_turn_minor], 100);
  EXPECT_EQ(counts[FaultLabel::inter_turn_severe], 100);
}

TEST(Dataset, DeterministicAndEmpty) {
  const auto cases = default_cases(builtin_fixtures());
  const auto a = build_dataset(cases, 1, 0.0, 1);
  const auto b = build_dataset(cases, 1, 0.0, 1);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
  EXPECT_TRUE(build_dataset({}, 5, 0.02, 7).empty());
  EXPECT_THROW(build_dataset(cases, 0, 0.02, 7), ConfigError);
}

TEST(Dataset, DefaultCaseSlips) {
  const auto cases = default_cases(builtin_fixtures());
  ASSERT_EQ(cases.size(), 3u);
  EXPECT_NEAR(cases[0].slip.slip, 0.35 / 3.0, 1e-12);
  EXPECT_EQ(cases[1].slip.slip, 0.133);
  EXPECT_EQ(cases[2].slip.slip, 0.166);
}

TEST(Dataset, CsvRoundTrip) {
  const auto data = build_dataset(default_cases(builtin_fixtures()), 2, 0.02, 7);
  std::stringstream ss;
  write_dataset(ss, data);
  EXPECT_EQ(ss.str().rfind("# layout=1p;1n;3p;3n;5p;5n;7p;7n;9p;9n\nlabel,v1,", 0), 0u);
  const auto back = read_dataset(ss);
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back[i].values, data[i].values);
    EXPECT_EQ(back[i].label, data[i].label);
    EXPECT_EQ(back[i].layout, data[i].layout);
  }
}

TEST(Dataset, CsvErrors) {
  std::istringstream no_layout("label,v1\nhealthy,1\n");
  EXPECT_THROW(read_dataset(no_layout), ParseError);
  std::istringstream width("# layout=1p;1n\nhealthy,1\n");
  EXPECT_THROW(read_dataset(width), ParseError);
  std::istringstream label("# layout=1p\nsick,1\n");
  EXPECT_THROW(read_dataset(label), ParseError);
}
