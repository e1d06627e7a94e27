#pragma once

// Flat run configuration: one `dotted.key = value` per line, `#` comments.
// Command-line overrides are applied on top of the file.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace confdim::cli {

// A configuration problem, reported with the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "config");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  // Parses "key=value".
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::optional<std::string>& fallback = std::nullopt) const;
  double get_real(const std::string& key, const std::optional<double>& fallback = std::nullopt) const;
  // Inclusive bounds; violations name the key.
  double get_real_in(const std::string& key, double lo, double hi, const std::optional<double>& fallback = std::nullopt) const;
  std::size_t get_count(const std::string& key, std::size_t lo, std::size_t hi,
                        const std::optional<std::size_t>& fallback = std::nullopt) const;
  std::uint64_t get_seed(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_reals(const std::string& key) const;

  // Every key must be one of `known`.
  void check_keys(const std::vector<std::string>& known) const;

  // FNV-1a over the sorted "key=value" lines, as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

// Accepts decimals and fractions "p/q".
double parse_real(const std::string& text, const std::string& key);
std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

}  // namespace confdim::cli
