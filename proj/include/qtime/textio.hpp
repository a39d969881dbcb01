#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qtime {

/// Shortest round-trip decimal rendering of a double (std::to_chars).
/// Integral counts are rendered without a fractional part elsewhere; this is
/// for real-valued fields in all tabular artifacts.
std::string format_double(double v);

/// Strict double parse of an entire token. Throws DataError on trailing junk.
double parse_double(std::string_view s, const std::string& context);

/// Strict nonnegative integer parse of an entire token.
long long parse_int(std::string_view s, const std::string& context);

std::string_view trim(std::string_view s);

/// Splits one delimiter-separated line; fields are trimmed of surrounding
/// whitespace. Empty trailing fields are preserved.
std::vector<std::string> split_fields(std::string_view line, char delim = ',');

std::string read_text_file(const std::string& path);

/// Writes the file only through a complete, successful stream; throws on I/O error.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qtime
