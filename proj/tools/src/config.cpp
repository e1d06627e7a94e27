#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace confdim::cli {

std::string trim(const std::string& text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

namespace {

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
  });
}

double parse_decimal(const std::string& s, const std::string& key) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) throw ConfigError(key, "expected a number, got '" + s + "'");
  return v;
}

}  // namespace

double parse_real(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  double v = 0.0;
  if (slash == std::string::npos) {
    v = parse_decimal(s, key);
  } else {
    const double num = parse_decimal(trim(s.substr(0, slash)), key);
    const double den = parse_decimal(trim(s.substr(slash + 1)), key);
    if (den == 0.0) throw ConfigError(key, "zero denominator in '" + s + "'");
    v = num / den;
  }
  if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
  return v;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError("", where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw ConfigError("", where + ": malformed key '" + key + "'");
    if (cfg.has(key)) throw ConfigError(key, where + ": duplicate key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("", "malformed key '" + key + "'");
  values_[key] = trim(value);
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' is not KEY=VALUE");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string Config::get_string(const std::string& key, const std::optional<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  if (fallback) return *fallback;
  throw ConfigError(key, "required key is missing");
}

double Config::get_real(const std::string& key, const std::optional<double>& fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return parse_real(it->second, key);
  if (fallback) return *fallback;
  throw ConfigError(key, "required key is missing");
}

double Config::get_real_in(const std::string& key, double lo, double hi, const std::optional<double>& fallback) const {
  const double v = get_real(key, fallback);
  if (!(v >= lo && v <= hi)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "value %g outside [%g, %g]", v, lo, hi);
    throw ConfigError(key, buf);
  }
  return v;
}

std::size_t Config::get_count(const std::string& key, std::size_t lo, std::size_t hi,
                              const std::optional<std::size_t>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    throw ConfigError(key, "required key is missing");
  }
  std::size_t v = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
  if (v < lo || v > hi)
    throw ConfigError(key, "value " + s + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::uint64_t Config::get_seed(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "sampling needs a seed (set it or pass --seed)");
  std::uint64_t v = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, "expected a non-negative integer seed, got '" + s + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> Config::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split(get_string(key), ',')) out.push_back(parse_real(part, key));
  return out;
}

void Config::check_keys(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_)
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key for this command");
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [key, value] : values_) feed(key + "=" + value + "\n");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace confdim::cli
