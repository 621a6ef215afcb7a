#include "ftlr/config.hpp"

#include "ftlr/core.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace ftlr {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

KeyValues parse_key_values(std::istream& in, std::string_view source_name)
{
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw IngestError(std::string(source_name) + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key(trim(text.substr(0, eq)));
        if (key.empty())
            throw IngestError(std::string(source_name) + ":" + std::to_string(line_no) + ": empty key");
        kv[key] = std::string(trim(text.substr(eq + 1)));
    }
    return kv;
}

KeyValues load_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IngestError("cannot open " + path.string());
    return parse_key_values(in, path.string());
}

void write_key_values(std::ostream& out, const KeyValues& kv)
{
    for (const auto& [key, value] : kv)
        out << key << '=' << value << '\n';
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    if (text == "inf")
        return INFINITY;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument(std::string(key) + ": '" + std::string(text) + "' is not a number");
    return v;
}

int parse_int(std::string_view key, std::string_view text)
{
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument(std::string(key) + ": '" + std::string(text) + "' is not an integer");
    return v;
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

} // namespace ftlr
