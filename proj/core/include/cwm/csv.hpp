#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cwm {

/// Shortest decimal text that parses back to exactly `value`.
std::string shortest(double value);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_quote(std::string_view field);

/// Splits one CSV line on commas, honouring double-quoted fields.
std::vector<std::string> csv_split(std::string_view line);

/// Strict numeric parsing of a whole field (surrounding blanks allowed).
/// Throws InputError on anything else.
double parse_real(std::string_view text);
std::uint64_t parse_unsigned(std::string_view text);

}  // namespace cwm
