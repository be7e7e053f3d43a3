#include "degpar/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<long> parse_integer(const std::string& text) {
    if (text.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (errno != 0 || end != text.c_str() + text.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    return std::nullopt;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

const char* type_name(ValueType t) {
    switch (t) {
        case ValueType::Real: return "real";
        case ValueType::Integer: return "integer";
        case ValueType::Boolean: return "boolean";
        case ValueType::Text: return "text";
    }
    return "?";
}

}  // namespace

std::optional<double> parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        const auto num = parse_real(t.substr(0, slash));
        const auto den = parse_real(t.substr(slash + 1));
        if (!num || !den || *den == 0.0) return std::nullopt;
        return *num / *den;
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

Schema& Schema::add(const std::string& key, ValueType type, std::optional<std::string> default_value,
                    std::string help) {
    keys_[key] = KeySpec{type, std::move(default_value), std::move(help)};
    return *this;
}

const KeySpec* Schema::find(const std::string& key) const {
    const auto it = keys_.find(key);
    return it == keys_.end() ? nullptr : &it->second;
}

Config Config::parse(std::istream& is, const Schema& schema, const std::string& source) {
    Config cfg(schema);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string origin = source + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) fail(ErrorKind::Config, origin + ": expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        if (cfg.values_.contains(key))
            fail(ErrorKind::Config, origin + ": duplicate key '" + key + "' (first set at " +
                                        cfg.values_.at(key).origin + ")");
        cfg.set(key, trim(body.substr(eq + 1)), origin);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
    return parse(in, schema, path);
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
    const KeySpec* ks = schema_->find(key);
    if (!ks) fail(ErrorKind::Config, origin + ": unknown key '" + key + "'");
    bool ok = true;
    switch (ks->type) {
        case ValueType::Real:
            ok = parse_real(value).has_value();
            break;
        case ValueType::Integer:
            ok = parse_integer(value).has_value();
            break;
        case ValueType::Boolean:
            ok = parse_bool(value).has_value();
            break;
        case ValueType::Text:
            break;
    }
    if (!ok)
        fail(ErrorKind::Config, origin + ": key '" + key + "' expects a " + type_name(ks->type) + ", got '" + value + "'");
    values_[key] = Entry{value, origin};
}

void Config::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "--override expects KEY=VALUE, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--override");
}

const KeySpec& Config::spec(const std::string& key) const {
    const KeySpec* ks = schema_->find(key);
    require(ks != nullptr, "config: key '" + key + "' is not in the schema");
    return *ks;
}

bool Config::has(const std::string& key) const {
    return values_.contains(key) || spec(key).default_value.has_value();
}

std::pair<std::string, std::string> Config::raw(const std::string& key) const {
    if (const auto it = values_.find(key); it != values_.end()) return {it->second.value, it->second.origin};
    const KeySpec& ks = spec(key);
    if (!ks.default_value) fail(ErrorKind::Config, "missing required key '" + key + "'");
    return {*ks.default_value, "default"};
}

double Config::real(const std::string& key) const {
    const auto [v, origin] = raw(key);
    const auto r = parse_real(v);
    if (!r) fail(ErrorKind::Config, origin + ": key '" + key + "' is not a real: '" + v + "'");
    return *r;
}

long Config::integer(const std::string& key) const {
    const auto [v, origin] = raw(key);
    const auto r = parse_integer(v);
    if (!r) fail(ErrorKind::Config, origin + ": key '" + key + "' is not an integer: '" + v + "'");
    return *r;
}

bool Config::boolean(const std::string& key) const {
    const auto [v, origin] = raw(key);
    const auto r = parse_bool(v);
    if (!r) fail(ErrorKind::Config, origin + ": key '" + key + "' is not a boolean: '" + v + "'");
    return *r;
}

std::string Config::text(const std::string& key) const { return raw(key).first; }

std::optional<double> Config::real_opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return real(key);
}

std::vector<double> Config::real_list(const std::string& key) const {
    const auto [v, origin] = raw(key);
    std::vector<double> out;
    for (const std::string& item : split(v, ',')) {
        const auto r = parse_real(item);
        if (!r) fail(ErrorKind::Config, origin + ": key '" + key + "' has a malformed list entry '" + item + "'");
        out.push_back(*r);
    }
    return out;
}

void Config::dump(std::ostream& os) const {
    for (const auto& [key, ks] : schema_->keys()) {
        if (const auto it = values_.find(key); it != values_.end()) os << key << " = " << it->second.value << '\n';
        else if (ks.default_value) os << key << " = " << *ks.default_value << '\n';
    }
}

}  // namespace degpar
