#pragma once

#include <map>
#include <string>

namespace lab {

/// Flat key=value configuration with [section] headers and '#' comments.
/// Serialization is sorted, so parse -> serialize -> parse is the identity
/// on the parsed structure.
struct Config {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static Config parse(const std::string& text);
    static Config parse_file(const std::string& path);
    std::string serialize() const;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    bool operator==(const Config& o) const { return sections == o.sections; }
};

}  // namespace lab
