#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcsa/motor.hpp"
#include "mcsa/sidebands.hpp"
#include "mcsa/spectrum.hpp"

namespace mcsa {

struct FeatureSlot {
  int k = 0;
  Branch branch = Branch::positive;

  friend bool operator==(const FeatureSlot&, const FeatureSlot&) = default;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<FeatureSlot> layout;
  std::optional<FaultLabel> label;
};

enum class Normalize { none, by_fundamental };

/// How sideband amplitudes are read off the spectrum.
enum class Estimator {
  peak,  ///< measure_peak per grid entry
  fit,   ///< joint least-squares at the grid frequencies (fit_amplitudes)
};

std::string_view to_string(Normalize n);
Normalize parse_normalize(std::string_view name);
std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct ExtractOptions {
  Normalize normalize = Normalize::by_fundamental;
  Estimator estimator = Estimator::fit;
  int half_width_bins = 2;
};

/// One value per grid entry, in grid order. With by_fundamental the values
/// are divided by the amplitude measured at the grid's supply frequency
/// (a zero fundamental yields all-zero features). Grid frequencies at or
/// above Nyquist throw DomainError.
FeatureVector extract_features(const Spectrum& s, const SidebandGrid& grid,
                               const ExtractOptions& options = {});

/// Grid whose entries sit exactly on a fixture table's printed frequencies.
SidebandGrid grid_from_fixture(const FixtureTable& table);

struct DatasetCase {
  FaultSignature fault;
  SlipState slip;
};

struct DatasetConfig {
  MotorParams motor = MotorParams::lab_motor();
  double fundamental_amp = 1.0;
  double sample_rate_hz = 3250.0;
  std::size_t n_samples = 390;
  std::vector<int> k_values{1, 3, 5, 7, 9};
  NSchedule schedule = NSchedule::fixed_one;
  Window window = Window::hann;
  ExtractOptions extract;
};

/// per_case labelled vectors for every case: synthesize -> transform ->
/// extract_features, with the grid predicted from each case's slip. The
/// seed of sample j of case c is derive_seed(seed, c, j), so results do not
/// depend on evaluation order.
std::vector<FeatureVector> build_dataset(const std::vector<DatasetCase>& cases, int per_case,
                                         double noise_sigma, std::uint64_t seed,
                                         const DatasetConfig& config = {});

/// healthy (nr = 2650 rpm), ten_turns and thirty_turns at their fixture slips.
std::vector<DatasetCase> default_cases(const std::vector<FixtureTable>& fixtures,
                                       const MotorParams& motor = MotorParams::lab_motor());

// Dataset CSV: "# layout=<k><p|n>;..." then "label,v1,...,vD" rows.
void write_dataset(std::ostream& out, const std::vector<FeatureVector>& data);
std::vector<FeatureVector> read_dataset(std::istream& in);

/// Shuffles with `seed` and moves the last round(fraction * size) vectors of
/// the permutation into the second (held-out) set. fraction must lie in [0, 1).
std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> split_holdout(
    const std::vector<FeatureVector>& data, double fraction, std::uint64_t seed);

std::string layout_string(const std::vector<FeatureSlot>& layout);

}  // namespace mcsa
