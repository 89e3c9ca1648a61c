#include "runner/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gwpdyn/errors.hpp"

namespace gwp::runner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& key, const std::string& message) {
  throw Error(ErrorCode::config, key + ": " + message, key);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  return true;
}

double to_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) config_error(key, "expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    config_error(key, "expected a number, got '" + t + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  if (v.empty()) config_error(key, "empty value");
  if (v.front() == '[') {
    if (v.back() != ']') config_error(key, "unterminated list");
    v = trim(v.substr(1, v.size() - 2));
    std::vector<std::string> out;
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) config_error(key, "empty list element");
      out.push_back(item);
    }
    return out;
  }
  return {v};
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw Error(ErrorCode::config, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw Error(ErrorCode::config, where + ": invalid key '" + key + "'", key);
    if (value.empty()) config_error(key, "empty value (" + where + ")");
    if (c.values_.count(key)) config_error(key, "duplicate key (" + where + ")");
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) config_error(key, "invalid key");
  if (trim(value).empty()) config_error(key, "empty value");
  values_[key] = trim(value);
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error(key, "missing required key");
  used_.insert(key);
  return it->second;
}

std::string Config::str(const std::string& key) const {
  const auto items = split_list(key, raw(key));
  if (items.size() != 1) config_error(key, "expected a single value");
  return items[0];
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::num(const std::string& key) const { return to_number(key, str(key)); }

double Config::num(const std::string& key, double fallback) const {
  return has(key) ? num(key) : fallback;
}

long Config::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 9e15) config_error(key, "expected an integer");
  return static_cast<long>(v);
}

long Config::integer(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(key, "expected true or false");
}

std::vector<double> Config::nums(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(key, raw(key))) out.push_back(to_number(key, item));
  return out;
}

std::vector<std::string> Config::strs(const std::string& key) const {
  return split_list(key, raw(key));
}

Vec Config::vec(const std::string& key, int n) const {
  const auto v = nums(key);
  if (v.size() == 1) return Vec::Constant(n, v[0]);
  if (static_cast<int>(v.size()) != n)
    config_error(key, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  return Eigen::Map<const Vec>(v.data(), n);
}

Vec Config::vec(const std::string& key, int n, double fallback) const {
  return has(key) ? vec(key, n) : Vec::Constant(n, fallback);
}

void Config::require_all_used() const {
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) config_error(k, "unknown or unused key");
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace gwp::runner
