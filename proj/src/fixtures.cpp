#include "mcsa/fixtures.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mcsa/error.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

constexpr std::string_view kHeader = "# case_id,k,pos_freq_hz,pos_amp,neg_freq_hz,neg_amp";

// Comment lines: "# meta <case> f rpm slip kw p" and "# note <case> <text>".
bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

double field_double(std::string_view field, std::string_view name, std::size_t line) {
  double v = 0.0;
  if (!text::parse_double(field, v)) {
    throw ParseError("bad " + std::string(name) + " '" + std::string(field) + "'", line);
  }
  return v;
}

struct Builder {
  std::vector<FixtureTable> tables;
  std::vector<bool> has_meta;

  FixtureTable& table(FixtureCase c) {
    for (auto& t : tables) {
      if (t.case_id == c) return t;
    }
    tables.push_back(FixtureTable{c, {}, {}, {}});
    has_meta.push_back(false);
    return tables.back();
  }
  std::size_t index_of(FixtureCase c) const {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (tables[i].case_id == c) return i;
    }
    return tables.size();
  }
};

void parse_meta(Builder& b, std::string_view body, std::size_t line) {
  std::vector<std::string_view> tok;
  for (auto part : text::split(body, ' ')) {
    if (!part.empty()) tok.push_back(part);
  }
  if (tok.size() != 6) throw ParseError("meta line needs: case_id f_hz rpm slip kw p", line);
  FixtureCase c;
  try {
    c = parse_fixture_case(tok[0]);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
  FixtureTable& t = b.table(c);
  t.meta.supply_freq_hz = field_double(tok[1], "f_hz", line);
  t.meta.rotor_speed_rpm = field_double(tok[2], "rpm", line);
  t.meta.slip = field_double(tok[3], "slip", line);
  t.meta.rated_kw = field_double(tok[4], "kw", line);
  long long p = 0;
  if (!text::parse_int(tok[5], p) || p < 1) throw ParseError("bad pole pairs", line);
  t.meta.pole_pairs = static_cast<int>(p);
  b.has_meta[b.index_of(c)] = true;
}

void parse_note(Builder& b, std::string_view body, std::size_t line) {
  const auto space = body.find(' ');
  const auto name = body.substr(0, space);
  FixtureCase c;
  try {
    c = parse_fixture_case(name);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
  b.table(c).note = space == std::string_view::npos ? std::string{} : std::string(body.substr(space + 1));
}

void parse_row(Builder& b, std::string_view row, std::size_t line) {
  const auto fields = text::split(row, ',');
  if (fields.size() != 6) {
    throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), line);
  }
  FixtureCase c;
  try {
    c = parse_fixture_case(text::trim(fields[0]));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
  long long k = 0;
  if (!text::parse_int(fields[1], k) || k < 1 || k % 2 == 0) {
    throw ParseError("k must be a positive odd integer", line);
  }
  FixtureRow r;
  r.k = static_cast<int>(k);
  r.pos_freq_hz = field_double(fields[2], "pos_freq_hz", line);
  r.pos_amplitude = field_double(fields[3], "pos_amp", line);
  r.neg_freq_hz = field_double(fields[4], "neg_freq_hz", line);
  r.neg_amplitude = field_double(fields[5], "neg_amp", line);
  if (r.pos_amplitude < 0.0 || r.neg_amplitude < 0.0) {
    throw ValidationError("line " + std::to_string(line) + ": negative amplitude");
  }
  if (r.pos_freq_hz < 0.0 || r.neg_freq_hz < 0.0) {
    throw ValidationError("line " + std::to_string(line) + ": negative frequency");
  }
  FixtureTable& t = b.table(c);
  if (t.find_row(r.k)) {
    throw ValidationError("line " + std::to_string(line) + ": duplicate k=" + std::to_string(r.k) +
                          " for " + std::string(to_string(c)));
  }
  t.rows.push_back(r);
}

}  // namespace

std::string_view to_string(FixtureCase c) {
  switch (c) {
    case FixtureCase::ten_turns:
      return "ten_turns";
    case FixtureCase::thirty_turns:
      return "thirty_turns";
  }
  return "?";
}

FixtureCase parse_fixture_case(std::string_view name) {
  if (name == "ten_turns") return FixtureCase::ten_turns;
  if (name == "thirty_turns") return FixtureCase::thirty_turns;
  throw ParseError("unknown fixture case '" + std::string(name) + "'", 0);
}

const FixtureRow* FixtureTable::find_row(int k) const {
  for (const auto& r : rows) {
    if (r.k == k) return &r;
  }
  return nullptr;
}

std::vector<FixtureTable> load_fixtures(std::istream& in) {
  Builder b;
  std::string raw;
  std::size_t line = 0;
  std::size_t row_count = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = text::chomp(raw);
    if (text::trim(s).empty()) continue;
    if (starts_with(s, "# meta ")) {
      parse_meta(b, s.substr(7), line);
    } else if (starts_with(s, "# note ")) {
      parse_note(b, s.substr(7), line);
    } else if (s.front() == '#') {
      continue;
    } else {
      parse_row(b, s, line);
      ++row_count;
    }
  }
  if (row_count == 0) throw ParseError("fixture file contains no rows", line);
  for (std::size_t i = 0; i < b.tables.size(); ++i) {
    if (!b.tables[i].rows.empty() && !b.has_meta[i]) {
      throw ValidationError("case " + std::string(to_string(b.tables[i].case_id)) +
                            " has rows but no '# meta' line");
    }
  }
  return std::move(b.tables);
}

std::vector<FixtureTable> load_fixtures_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open fixture file '" + path + "'");
  return load_fixtures(in);
}

std::string serialize_fixtures(const std::vector<FixtureTable>& tables) {
  using text::format_shortest;
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& t : tables) {
    const auto name = to_string(t.case_id);
    out << "# meta " << name << ' ' << format_shortest(t.meta.supply_freq_hz) << ' '
        << format_shortest(t.meta.rotor_speed_rpm) << ' ' << format_shortest(t.meta.slip) << ' '
        << format_shortest(t.meta.rated_kw) << ' ' << t.meta.pole_pairs << '\n';
    if (!t.note.empty()) out << "# note " << name << ' ' << t.note << '\n';
    for (const auto& r : t.rows) {
      out << name << ',' << r.k << ',' << format_shortest(r.pos_freq_hz) << ','
          << format_shortest(r.pos_amplitude) << ',' << format_shortest(r.neg_freq_hz) << ','
          << format_shortest(r.neg_amplitude) << '\n';
    }
  }
  return out.str();
}

std::vector<FixtureTable> builtin_fixtures() {
  std::istringstream in{std::string(builtin_fixture_text())};
  return load_fixtures(in);
}

const FixtureTable& find_fixture(const std::vector<FixtureTable>& tables, FixtureCase c) {
  for (const auto& t : tables) {
    if (t.case_id == c && !t.rows.empty()) return t;
  }
  throw NotFoundError("no fixture rows for case " + std::string(to_string(c)));
}

}  // namespace mcsa
