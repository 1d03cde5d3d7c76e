#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcsa {

enum class FixtureCase { ten_turns, thirty_turns };

std::string_view to_string(FixtureCase c);
/// Throws ParseError on an unknown name.
FixtureCase parse_fixture_case(std::string_view name);

struct FixtureMeta {
  double supply_freq_hz = 50.0;
  double rotor_speed_rpm = 0.0;
  /// The slip under which the row frequencies are mutually consistent.
  double slip = 0.0;
  double rated_kw = 0.0;
  int pole_pairs = 1;
};

struct FixtureRow {
  int k = 0;
  double pos_freq_hz = 0.0;
  double pos_amplitude = 0.0;
  double neg_freq_hz = 0.0;
  double neg_amplitude = 0.0;
};

/// One measured harmonic table, stored exactly as printed.
struct FixtureTable {
  FixtureCase case_id = FixtureCase::ten_turns;
  FixtureMeta meta;
  /// Free-text provenance of the printed table (label it was printed under).
  std::string note;
  std::vector<FixtureRow> rows;

  const FixtureRow* find_row(int k) const;
};

/// Parses the fixture CSV. Rows must have unique odd k and nonnegative
/// amplitudes; every case with rows must also carry a `# meta` line.
std::vector<FixtureTable> load_fixtures(std::istream& in);
std::vector<FixtureTable> load_fixtures_file(const std::string& path);

/// Canonical text form; `serialize_fixtures(load_fixtures(f))` reproduces
/// the shipped file byte for byte.
std::string serialize_fixtures(const std::vector<FixtureTable>& tables);

/// The fixture file shipped with the library (compiled in).
std::string_view builtin_fixture_text();
std::vector<FixtureTable> builtin_fixtures();

/// Throws NotFoundError when the case is absent or has no rows.
const FixtureTable& find_fixture(const std::vector<FixtureTable>& tables, FixtureCase c);

}  // namespace mcsa
