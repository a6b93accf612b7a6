#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dff {

using CsvRow = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF line ends.
// Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::string_view text);

// Quotes a field only when it contains a comma, quote or line break.
std::string csv_field(std::string_view field);

std::string read_text_file(const std::string& path);

}  // namespace dff
