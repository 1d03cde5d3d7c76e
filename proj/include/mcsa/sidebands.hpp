#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcsa/fixtures.hpp"

namespace mcsa {

enum class Branch { positive, negative };

std::string_view to_string(Branch b);

/// How the slip coefficient n is chosen per harmonic order k.
enum class NSchedule {
  fixed_one,        ///< n = 1 on both branches
  half_k_plus_one,  ///< n = 1 on the positive branch, n = (k+1)/2 on the negative one (odd k)
};

std::string_view to_string(NSchedule s);
/// Accepts "fixed_one"/"n1" and "half_k_plus_one"/"half".
NSchedule parse_schedule(std::string_view name);

struct SidebandEntry {
  int k = 0;
  int n = 0;
  Branch branch = Branch::positive;
  double freq_hz = 0.0;
  /// The raw formula gave a negative frequency; freq_hz holds its magnitude.
  bool reflected = false;
  std::optional<double> amplitude;
};

/// Predicted fault-harmonic frequencies, sorted by (k, branch) with the
/// positive branch first.
struct SidebandGrid {
  std::string case_label;
  double slip = 0.0;
  int pole_pairs = 1;
  double supply_freq_hz = 50.0;
  std::vector<SidebandEntry> entries;
};

/// Odd orders 1, 3, ..., k_max.
std::vector<int> odd_orders(int k_max = 21);

/// Stator-current harmonics f = (k +- n (1 - s) / p) f1. Requires
/// 0 <= s < 1 and positive k; duplicate k values are collapsed.
SidebandGrid flux_harmonics(double slip, int pole_pairs, double supply_freq_hz,
                            std::span<const int> k_values, NSchedule schedule);

/// Broken-bar sidebands f1 (1 +- 2 m s) for every order m. Requires
/// 0 <= s < 0.5. Entries carry k = m, n = 1.
SidebandGrid broken_bar_sidebands(double slip, double supply_freq_hz, std::span<const int> orders);

struct MatchRow {
  int k = 0;
  Branch branch = Branch::positive;
  int n = 0;
  double predicted_hz = 0.0;
  double fixture_hz = 0.0;
  double abs_delta_hz = 0.0;
  bool pass = false;
};

struct MatchReport {
  double tol_hz = 0.0;
  std::vector<MatchRow> rows;

  std::size_t pass_count() const;
  bool all_pass() const { return pass_count() == rows.size(); }
  std::vector<const MatchRow*> failures() const;
};

/// Compares every fixture frequency with its prediction. Throws
/// CoverageError when the fixture is empty or has a k the grid lacks.
MatchReport match_table(const SidebandGrid& grid, const FixtureTable& fixture, double tol_hz);

/// `k,branch,n,predicted_hz,fixture_hz,abs_delta_hz,pass`
void write_match_report(std::ostream& out, const MatchReport& report);
void write_grid(std::ostream& out, const SidebandGrid& grid);

}  // namespace mcsa
