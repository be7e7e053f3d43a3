#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace degpar {

enum class ValueType { Real, Integer, Boolean, Text };

struct KeySpec {
    ValueType type = ValueType::Real;
    std::optional<std::string> default_value;
    std::string help;
};

/// The set of keys a config may contain. Anything else is rejected.
class Schema {
public:
    Schema& add(const std::string& key, ValueType type, std::optional<std::string> default_value = std::nullopt,
                std::string help = {});
    const KeySpec* find(const std::string& key) const;
    const std::map<std::string, KeySpec>& keys() const { return keys_; }

private:
    std::map<std::string, KeySpec> keys_;
};

/// Flat `key = value` file with dotted keys; `#` starts a comment.
/// Reals accept fractions such as `1/64`; lists are comma separated.
class Config {
public:
    explicit Config(const Schema& schema) : schema_(&schema) {}

    static Config parse(std::istream& is, const Schema& schema, const std::string& source);
    static Config parse_file(const std::string& path, const Schema& schema);

    /// Validates key and value type; `origin` prefixes diagnostics.
    void set(const std::string& key, const std::string& value, const std::string& origin);
    /// `KEY=VALUE`, as given to --override.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const;
    bool explicitly_set(const std::string& key) const { return values_.contains(key); }
    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::optional<double> real_opt(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;

    /// Every effective key = value (defaults included), sorted.
    void dump(std::ostream& os) const;

private:
    struct Entry {
        std::string value;
        std::string origin;
    };
    const KeySpec& spec(const std::string& key) const;
    std::pair<std::string, std::string> raw(const std::string& key) const;

    const Schema* schema_;
    std::map<std::string, Entry> values_;
};

/// Parses a real or a fraction `a/b`; nullopt when malformed.
std::optional<double> parse_real(const std::string& text);

}  // namespace degpar
