#pragma once

// Small text helpers shared by the CSV and JSON writers. Not installed.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plfit::detail {

// %.17g; non-finite values become "nan" / "inf" / "-inf".
std::string format_number(double value);

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
// Quotes a field when it contains a comma, quote or newline.
std::string quote_csv_field(std::string_view field);

// Whole-string parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view s);

}  // namespace plfit::detail
