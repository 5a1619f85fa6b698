#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ogrl {

/// Ordered `key = value` store used for every human-readable config file.
///
/// Lines are `key = value`; text after `#` is a comment; blank lines are ignored.
/// Keys keep their first-insertion order so written files diff cleanly.
class KvConfig {
public:
    static KvConfig parse(std::string_view text);
    static KvConfig load(const std::filesystem::path& path);

    void set(const std::string& key, std::string value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    bool contains(std::string_view key) const;
    std::optional<std::string> raw(std::string_view key) const;

    std::string get_string(std::string_view key, const std::string& fallback) const;
    double get_double(std::string_view key, double fallback) const;
    std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
    std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    std::vector<double> get_doubles(std::string_view key, const std::vector<double>& fallback) const;

    /// Copies every entry of `other` over this one.
    void merge(const KvConfig& other);

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
    std::string to_string() const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

} // namespace ogrl
