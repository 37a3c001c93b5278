#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "camg/common.hpp"

namespace camg {

/// Flat key=value configuration: one key per line, '#' starts a comment,
/// nested keys are dotted (smoother.predictor.kind=sgs). Every lookup is
/// recorded so that misspelled keys can be reported.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(const std::string& text, const std::string& source = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    index_t get_int(const std::string& key, index_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;

    /// Throws ConfigError naming each key that was never looked up.
    void require_all_used() const;

    /// "source:line" of a key, for diagnostics.
    std::string where(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::optional<Entry> lookup(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    std::string source_;
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

}  // namespace camg
