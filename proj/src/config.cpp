#include "camg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace camg {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Accepts plain numbers and the forms "pi", "k*pi", "pi/k", "k*pi/m".
std::optional<double> parse_number(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;

    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) return std::nullopt;
    double factor = 1.0, divisor = 1.0;
    const std::string head = trim(s.substr(0, pi_pos));
    const std::string tail = trim(s.substr(pi_pos + 2));
    if (!head.empty()) {
        if (head.back() != '*') return std::nullopt;
        const auto f = parse_number(head.substr(0, head.size() - 1));
        if (!f) return std::nullopt;
        factor = *f;
    }
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        const auto d = parse_number(tail.substr(1));
        if (!d || *d == 0.0) return std::nullopt;
        divisor = *d;
    }
    return factor * std::numbers::pi / divisor;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& source) {
    KeyValueConfig cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        if (cfg.entries_.count(key))
            throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "' (first at line " +
                              std::to_string(cfg.entries_[key].line) + ")");
        cfg.entries_[key] = Entry{value, line_no};
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    auto it = entries_.find(key);
    if (it == entries_.end())
        entries_[key] = Entry{value, 0};
    else
        it->second.value = value;
}

std::optional<KeyValueConfig::Entry> KeyValueConfig::lookup(const std::string& key) const {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::where(const std::string& key) const {
    const auto it = entries_.find(key);
    const int line = it == entries_.end() ? 0 : it->second.line;
    return (source_.empty() ? std::string("<config>") : source_) + ":" + std::to_string(line);
}

void KeyValueConfig::fail(const std::string& key, const std::string& what) const {
    throw ConfigError(where(key) + ": key '" + key + "': " + what);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto e = lookup(key);
    return e ? e->value : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto e = lookup(key);
    if (!e) return fallback;
    const auto v = parse_number(e->value);
    if (!v || !std::isfinite(*v)) fail(key, "expected a number, got '" + e->value + "'");
    return *v;
}

index_t KeyValueConfig::get_int(const std::string& key, index_t fallback) const {
    const auto e = lookup(key);
    if (!e) return fallback;
    index_t v = 0;
    const std::string& s = e->value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
    return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto e = lookup(key);
    if (!e) return fallback;
    std::string s = e->value;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail(key, "expected a boolean, got '" + e->value + "'");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto e = lookup(key);
    if (!e) return fallback;
    std::vector<double> out;
    std::istringstream ss(e->value);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto v = parse_number(item);
        if (!v) fail(key, "expected a comma-separated list of numbers, got '" + e->value + "'");
        out.push_back(*v);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

void KeyValueConfig::require_all_used() const {
    std::string unknown;
    for (const auto& [key, entry] : entries_)
        if (!used_.count(key)) unknown += "\n  " + where(key) + ": unknown key '" + key + "'";
    if (!unknown.empty()) throw ConfigError("unrecognized configuration keys:" + unknown);
}

}  // namespace camg
