#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace ftlr {

/// Ordered key=value pairs. Files hold one pair per line; blank lines and
/// lines starting with '#' are ignored; surrounding whitespace is trimmed.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in, std::string_view source_name = "<input>");
KeyValues load_key_values(const std::filesystem::path& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

double parse_double(std::string_view key, std::string_view text);
int parse_int(std::string_view key, std::string_view text);

/// Shortest decimal text that round-trips to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
std::string format_double(double value);

} // namespace ftlr
