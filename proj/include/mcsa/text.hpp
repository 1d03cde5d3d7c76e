#pragma once

// Small text helpers shared by the CSV readers and writers.

#include <string>
#include <string_view>
#include <vector>

namespace mcsa::text {

/// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);

/// "%.17g" form; always round-trips.
std::string format_exact(double v);

/// Fixed number of significant digits ("%.<digits>g").
std::string format_sig(double v, int digits);

/// Parses the whole field as a double (surrounding blanks allowed).
bool parse_double(std::string_view field, double& out);
bool parse_int(std::string_view field, long long& out);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Strips a trailing '\r' left by CRLF files.
std::string_view chomp(std::string_view line);

}  // namespace mcsa::text
