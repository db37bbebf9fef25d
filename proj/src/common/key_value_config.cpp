#include "pdsc/common/key_value_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace pdsc {

namespace {

std::string trimmed(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
    const std::string text = trimmed(raw);
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("config key '" + key + "': cannot parse '" + text + "' as a number");
    }
    return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig config;
    std::istringstream in{std::string(text)};
    try {
        boost::property_tree::ini_parser::read_ini(in, config.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return config;
}

bool KeyValueConfig::contains(const std::string& key) const {
    return tree_.get_child_optional(key).has_value();
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(key)) {
        return trimmed(*v);
    }
    return std::nullopt;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
    auto raw = get_string(key);
    if (!raw) return std::nullopt;
    return parse_number<double>(key, *raw);
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
    auto raw = get_string(key);
    if (!raw) return std::nullopt;
    return parse_number<long long>(key, *raw);
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
    auto raw = get_string(key);
    if (!raw) return std::nullopt;
    std::string v = *raw;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + *raw + "'");
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    tree_.put(key, value);
}

void KeyValueConfig::read(const std::string& key, double& target) const {
    if (auto v = get_double(key)) target = *v;
}

void KeyValueConfig::read(const std::string& key, int& target) const {
    if (auto v = get_int(key)) target = static_cast<int>(*v);
}

void KeyValueConfig::read(const std::string& key, long long& target) const {
    if (auto v = get_int(key)) target = *v;
}

void KeyValueConfig::read(const std::string& key, std::uint64_t& target) const {
    auto raw = get_string(key);
    if (raw) target = parse_number<std::uint64_t>(key, *raw);
}

void KeyValueConfig::read(const std::string& key, bool& target) const {
    if (auto v = get_bool(key)) target = *v;
}

void KeyValueConfig::read(const std::string& key, std::string& target) const {
    if (auto v = get_string(key)) target = *v;
}

}  // namespace pdsc
