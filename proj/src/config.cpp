#include "transonic/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace transonic::config {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig kv;
  kv.text_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: missing '=' on line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    kv.entries_[key] = val;
  }
  return kv;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("config: missing key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a number: '" + s + "'");
  }
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? static_cast<int>(get_double(key)) : fallback;
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string s = get_string(key);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: key '" + key + "' is not a boolean: '" + s + "'");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::string s = get_string(key);
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config: list key '" + key + "' has non-numeric item '" + item + "'");
    }
  }
  return out;
}

bool RunConfig::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

RunConfig load_run_config(const KeyValueConfig& kv) {
  const bool has_tau = kv.has("params.tau");
  const bool has_alpha = kv.has("params.alpha");
  if (has_tau == has_alpha)
    throw ConfigError("config: exactly one of params.tau / params.alpha must be given");

  double J = kv.get_double("params.J");
  double L = kv.get_double("params.L");
  FlowParams params = has_tau ? FlowParams::with_tau(J, kv.get_double("params.tau"), L)
                              : FlowParams(J, kv.get_double("params.alpha"), L);

  std::string kind = kv.get_string_or("doping.kind", "constant");
  DopingProfile doping = DopingProfile::constant(1.0);
  if (kind == "constant") {
    doping = DopingProfile::constant(kv.get_double("doping.b0"));
  } else if (kind == "tabulated") {
    doping = DopingProfile::tabulated(kv.get_double_list("doping.knots"),
                                      kv.get_double_list("doping.values"));
  } else {
    throw ConfigError("config: doping.kind must be constant or tabulated");
  }

  RunConfig rc{params, doping, kv};
  rc.tol_scale = kv.get_double_or("tolerances.scale", 1.0);
  if (!(rc.tol_scale > 0.0)) throw ConfigError("config: tolerances.scale must be positive");

  std::string fmts = kv.get_string_or("output.formats", "csv,json");
  std::istringstream in(fmts);
  std::string f;
  while (std::getline(in, f, ',')) {
    f = trim(f);
    if (f.empty()) continue;
    if (f != "csv" && f != "json" && f != "svg")
      throw ConfigError("config: unknown output format '" + f + "'");
    rc.formats.push_back(f);
  }
  return rc;
}

}  // namespace transonic::config
