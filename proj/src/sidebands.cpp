#include "mcsa/sidebands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mcsa/error.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

SidebandEntry make_entry(int k, int n, Branch branch, double raw_hz) {
  SidebandEntry e;
  e.k = k;
  e.n = n;
  e.branch = branch;
  e.reflected = raw_hz < 0.0;
  e.freq_hz = std::abs(raw_hz);
  return e;
}

std::vector<int> sorted_orders(std::span<const int> values, const char* what) {
  if (values.empty()) throw DomainError(std::string(what) + " list must not be empty");
  std::vector<int> out(values.begin(), values.end());
  for (int v : out) {
    if (v < 1) throw DomainError(std::string(what) + " values must be positive integers");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_supply(double f) {
  if (!(std::isfinite(f) && f > 0.0)) throw DomainError("supply frequency must be positive");
}

}  // namespace

std::string_view to_string(Branch b) { return b == Branch::positive ? "positive" : "negative"; }

std::string_view to_string(NSchedule s) {
  return s == NSchedule::fixed_one ? "fixed_one" : "half_k_plus_one";
}

NSchedule parse_schedule(std::string_view name) {
  if (name == "fixed_one" || name == "n1") return NSchedule::fixed_one;
  if (name == "half_k_plus_one" || name == "half") return NSchedule::half_k_plus_one;
  throw ParseError("unknown n-schedule '" + std::string(name) + "'", 0);
}

std::vector<int> odd_orders(int k_max) {
  std::vector<int> k;
  for (int v = 1; v <= k_max; v += 2) k.push_back(v);
  return k;
}

SidebandGrid flux_harmonics(double slip, int pole_pairs, double supply_freq_hz,
                            std::span<const int> k_values, NSchedule schedule) {
  if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("slip must lie in [0, 1)");
  if (pole_pairs < 1) throw DomainError("pole_pairs must be >= 1");
  check_supply(supply_freq_hz);
  const auto ks = sorted_orders(k_values, "k");

  SidebandGrid grid;
  grid.slip = slip;
  grid.pole_pairs = pole_pairs;
  grid.supply_freq_hz = supply_freq_hz;
  grid.case_label = std::string(to_string(schedule));
  const double rotor = (1.0 - slip) / pole_pairs;
  for (int k : ks) {
    int n_neg = 1;
    if (schedule == NSchedule::half_k_plus_one) {
      if (k % 2 == 0) {
        throw ScheduleError("half_k_plus_one schedule needs odd k, got k=" + std::to_string(k));
      }
      n_neg = (k + 1) / 2;
    }
    grid.entries.push_back(make_entry(k, 1, Branch::positive, (k + rotor) * supply_freq_hz));
    grid.entries.push_back(make_entry(k, n_neg, Branch::negative, (k - n_neg * rotor) * supply_freq_hz));
  }
  return grid;
}

SidebandGrid broken_bar_sidebands(double slip, double supply_freq_hz, std::span<const int> orders) {
  if (!(slip >= 0.0 && slip < 0.5)) {
    throw DomainError("broken-bar sidebands need 0 <= slip < 0.5 (lower sideband would be negative)");
  }
  check_supply(supply_freq_hz);
  const auto ms = sorted_orders(orders, "order");

  SidebandGrid grid;
  grid.case_label = "broken_bar";
  grid.slip = slip;
  grid.pole_pairs = 1;
  grid.supply_freq_hz = supply_freq_hz;
  for (int m : ms) {
    grid.entries.push_back(make_entry(m, 1, Branch::positive, supply_freq_hz * (1.0 + 2.0 * m * slip)));
    grid.entries.push_back(make_entry(m, 1, Branch::negative, supply_freq_hz * (1.0 - 2.0 * m * slip)));
  }
  return grid;
}

std::size_t MatchReport::pass_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const MatchRow& r) { return r.pass; }));
}

std::vector<const MatchRow*> MatchReport::failures() const {
  std::vector<const MatchRow*> out;
  for (const auto& r : rows) {
    if (!r.pass) out.push_back(&r);
  }
  return out;
}

MatchReport match_table(const SidebandGrid& grid, const FixtureTable& fixture, double tol_hz) {
  if (!(tol_hz > 0.0)) throw DomainError("tolerance must be positive");
  if (fixture.rows.empty()) throw CoverageError("fixture table has no rows to match", {});

  auto lookup = [&](int k, Branch b) -> const SidebandEntry* {
    for (const auto& e : grid.entries) {
      if (e.k == k && e.branch == b) return &e;
    }
    return nullptr;
  };

  std::vector<int> missing;
  for (const auto& r : fixture.rows) {
    if (!lookup(r.k, Branch::positive) || !lookup(r.k, Branch::negative)) missing.push_back(r.k);
  }
  if (!missing.empty()) {
    std::string list;
    for (int k : missing) list += (list.empty() ? "" : ",") + std::to_string(k);
    throw CoverageError("grid does not cover fixture k = {" + list + "}", missing);
  }

  std::vector<FixtureRow> rows = fixture.rows;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.k < b.k; });

  MatchReport report;
  report.tol_hz = tol_hz;
  for (const auto& r : rows) {
    for (Branch b : {Branch::positive, Branch::negative}) {
      const SidebandEntry& e = *lookup(r.k, b);
      MatchRow m;
      m.k = r.k;
      m.branch = b;
      m.n = e.n;
      m.predicted_hz = e.freq_hz;
      m.fixture_hz = b == Branch::positive ? r.pos_freq_hz : r.neg_freq_hz;
      m.abs_delta_hz = std::abs(m.predicted_hz - m.fixture_hz);
      m.pass = m.abs_delta_hz <= tol_hz;
      report.rows.push_back(m);
    }
  }
  return report;
}

void write_match_report(std::ostream& out, const MatchReport& report) {
  out << "k,branch,n,predicted_hz,fixture_hz,abs_delta_hz,pass\n";
  for (const auto& r : report.rows) {
    out << r.k << ',' << to_string(r.branch) << ',' << r.n << ','
        << text::format_sig(r.predicted_hz, 10) << ',' << text::format_shortest(r.fixture_hz) << ','
        << text::format_sig(r.abs_delta_hz, 10) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_grid(std::ostream& out, const SidebandGrid& grid) {
  out << "k,branch,n,freq_hz,reflected\n";
  for (const auto& e : grid.entries) {
    out << e.k << ',' << to_string(e.branch) << ',' << e.n << ',' << text::format_sig(e.freq_hz, 10)
        << ',' << (e.reflected ? "true" : "false") << '\n';
  }
}

}  // namespace mcsa
