#pragma once

#include <map>
#include <string>
#include <vector>

namespace hjdisc {

/// Flat `key = value` configuration with dotted keys and `#` comments.
/// Parsing keeps insertion order out of the picture: keys are stored
/// sorted, duplicates take the last value.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Throws when a key outside `allowed` is present.
    void reject_unknown(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace hjdisc
