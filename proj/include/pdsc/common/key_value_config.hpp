#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>

namespace pdsc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sectioned key-value configuration ("[section]" headers, "key = value" lines).
// Keys are addressed as "section.key".
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig parse(std::string_view text);

    bool contains(const std::string& key) const;
    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    // Overwrites `target` only when the key is present.
    void read(const std::string& key, double& target) const;
    void read(const std::string& key, int& target) const;
    void read(const std::string& key, long long& target) const;
    void read(const std::string& key, std::uint64_t& target) const;
    void read(const std::string& key, bool& target) const;
    void read(const std::string& key, std::string& target) const;

private:
    boost::property_tree::ptree tree_;
};

}  // namespace pdsc
