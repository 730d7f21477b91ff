#ifndef TRANSONIC_CONFIG_HPP
#define TRANSONIC_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "transonic/doping.hpp"
#include "transonic/types.hpp"

namespace transonic::config {

/// Flat key-value configuration with dotted sections, one `key = value` per
/// line, `#` comments. One config describes one experiment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int_or(const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string text_;
};

/// Validated run configuration shared by every experiment.
struct RunConfig {
  FlowParams params;
  DopingProfile doping;
  KeyValueConfig raw;
  double tol_scale = 1.0;
  std::vector<std::string> formats;  // subset of {csv, json, svg}

  bool wants(const std::string& fmt) const;
};

/// Builds a RunConfig; rejects configs that supply both tau and alpha, or
/// neither.
RunConfig load_run_config(const KeyValueConfig& kv);

}  // namespace transonic::config

#endif  // TRANSONIC_CONFIG_HPP
