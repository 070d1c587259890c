#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spincam/perception.hpp"
#include "spincam/scenario.hpp"

namespace spincam {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored; a repeated key is an error.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;

  /// Throws InvalidConfig naming the first key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Comma-separated reals, e.g. "0.15,0.15,0.3".
std::vector<double> parse_real_list(const std::string& text);

ScenarioConfig scenario_from_config(const KeyValueConfig& kv);
KeyValueConfig scenario_to_config(const ScenarioConfig& cfg);

NoiseModel noise_from_config(const KeyValueConfig& kv);
KeyValueConfig noise_to_config(const NoiseModel& noise);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

}  // namespace spincam
