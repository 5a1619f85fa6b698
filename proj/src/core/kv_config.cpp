#include "ogrl/core/kv_config.hpp"

#include "ogrl/core/binary_io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace ogrl {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, const std::string& text)
{
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument("config key '" + std::string(key) + "': cannot parse '" + text + "'");
    return value;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

KvConfig KvConfig::parse(std::string_view text)
{
    KvConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        cfg.set(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void KvConfig::set(const std::string& key, std::string value)
{
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    if (it != entries_.end())
        it->second = std::move(value);
    else
        entries_.emplace_back(key, std::move(value));
}

void KvConfig::set(const std::string& key, double value) { set(key, format_double(value)); }
void KvConfig::set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }
void KvConfig::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

bool KvConfig::contains(std::string_view key) const { return raw(key).has_value(); }

std::optional<std::string> KvConfig::raw(std::string_view key) const
{
    for (const auto& [k, v] : entries_)
        if (k == key)
            return v;
    return std::nullopt;
}

std::string KvConfig::get_string(std::string_view key, const std::string& fallback) const
{
    return raw(key).value_or(fallback);
}

double KvConfig::get_double(std::string_view key, double fallback) const
{
    auto v = raw(key);
    return v ? parse_number<double>(key, *v) : fallback;
}

std::int64_t KvConfig::get_int(std::string_view key, std::int64_t fallback) const
{
    auto v = raw(key);
    return v ? parse_number<std::int64_t>(key, *v) : fallback;
}

std::uint64_t KvConfig::get_uint(std::string_view key, std::uint64_t fallback) const
{
    auto v = raw(key);
    return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

bool KvConfig::get_bool(std::string_view key, bool fallback) const
{
    auto v = raw(key);
    if (!v)
        return fallback;
    if (*v == "true" || *v == "1")
        return true;
    if (*v == "false" || *v == "0")
        return false;
    throw std::invalid_argument("config key '" + std::string(key) + "': expected true/false, got '" + *v + "'");
}

std::vector<double> KvConfig::get_doubles(std::string_view key, const std::vector<double>& fallback) const
{
    auto v = raw(key);
    if (!v)
        return fallback;
    std::vector<double> out;
    std::istringstream in(*v);
    std::string token;
    while (in >> token) {
        if (!token.empty() && token.back() == ',')
            token.pop_back();
        if (!token.empty())
            out.push_back(parse_number<double>(key, token));
    }
    return out;
}

void KvConfig::merge(const KvConfig& other)
{
    for (const auto& [k, v] : other.entries_)
        set(k, v);
}

std::string KvConfig::to_string() const
{
    std::string out;
    for (const auto& [k, v] : entries_)
        out += k + " = " + v + "\n";
    return out;
}

void KvConfig::save(const std::filesystem::path& path) const { write_file_atomic(path, to_string()); }

} // namespace ogrl
