#include "config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

void insert_pair(std::map<std::string, std::string>& into,
                 const std::string& line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError(where + ": expected key = value, got '" + line + "'");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(where + ": empty key in '" + line + "'");
  for (char c : key) {
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      throw ConfigError(where + ": invalid key '" + key +
                        "' (lowercase letters, digits, '_' only)");
  }
  if (value.empty())
    throw ConfigError(where + ": empty value for key '" + key + "'");
  if (!into.emplace(key, value).second)
    throw ConfigError(where + ": duplicate key '" + key + "'");
}

// Splits "<number><unit>" / "<number> <unit>"; unit may be empty.
bool split_number_unit(const std::string& text, double& number,
                       std::string& unit) {
  errno = 0;
  char* end = nullptr;
  number = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || errno == ERANGE) return false;
  unit = trim(std::string(end));
  return true;
}

[[noreturn]] void bad_unit(const std::string& key, const std::string& value,
                           const char* allowed) {
  throw ConfigError("key '" + key + "': value '" + value +
                    "' needs a unit (" + allowed + ")");
}

}  // namespace

Config Config::load(const std::string& path,
                    const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    insert_pair(cfg.values_, line, path + ":" + std::to_string(lineno));
  }
  for (const auto& ov : overrides) {
    std::map<std::string, std::string> one;
    insert_pair(one, ov, "--set '" + ov + "'");
    cfg.values_[one.begin()->first] = one.begin()->second;  // override wins
  }
  return cfg;
}

Config Config::from_overrides(const std::vector<std::string>& overrides) {
  Config cfg;
  for (const auto& ov : overrides) {
    std::map<std::string, std::string> one;
    insert_pair(one, ov, "--set '" + ov + "'");
    cfg.values_[one.begin()->first] = one.begin()->second;
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::raw(const std::string& key, bool& found) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    found = false;
    return {};
  }
  found = true;
  consumed_.insert(key);
  return it->second;
}

long long Config::get_int(const std::string& key,
                          std::optional<long long> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return n;
}

unsigned long long Config::get_seed(const std::string& key,
                                    unsigned long long def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) return def;
  errno = 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || v[0] == '-')
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return n;
}

double Config::get_double(const std::string& key, std::optional<double> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit) || !unit.empty())
    throw ConfigError("key '" + key + "': expected a bare number, got '" + v + "'");
  return num;
}

bool Config::get_bool(const std::string& key, std::optional<bool> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  if (v == "true" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::string Config::get_string(const std::string& key,
                               std::optional<std::string> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  return v;
}

std::string Config::get_enum(const std::string& key,
                             const std::vector<std::string>& allowed,
                             std::optional<std::string> def) {
  const std::string v = get_string(key, def);
  for (const auto& a : allowed)
    if (v == a) return v;
  std::ostringstream msg;
  msg << "key '" << key << "': '" << v << "' is not one of {";
  for (size_t i = 0; i < allowed.size(); ++i)
    msg << (i ? ", " : "") << allowed[i];
  msg << "}";
  throw ConfigError(msg.str());
}

double Config::get_frequency_hz(const std::string& key,
                                std::optional<double> def_hz) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def_hz) return *def_hz;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "'");
  if (unit == "Hz") return num;
  if (unit == "kHz") return num * 1e3;
  if (unit == "MHz") return num * 1e6;
  bad_unit(key, v, "Hz, kHz, MHz");
}

TimeValue Config::get_time(const std::string& key,
                           std::optional<TimeValue> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "'");
  if (unit == "s") return {num, false};
  if (unit == "ms") return {num * 1e-3, false};
  if (unit == "us") return {num * 1e-6, false};
  if (unit == "ns") return {num * 1e-9, false};
  if (unit == "tpi") return {num, true};
  bad_unit(key, v, "s, ms, us, ns, tpi");
}

double Config::get_temperature_k(const std::string& key,
                                 std::optional<double> def_k) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def_k) return *def_k;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "'");
  if (unit == "K") return num;
  if (unit == "mK") return num * 1e-3;
  if (unit == "uK") return num * 1e-6;
  bad_unit(key, v, "K, mK, uK");
}

double Config::get_angle_rad(const std::string& key,
                             std::optional<double> def_rad) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def_rad) return *def_rad;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "'");
  if (unit == "rad") return num;
  if (unit == "pi") return num * std::numbers::pi;
  bad_unit(key, v, "rad, pi");
}

double Config::get_fraction(const std::string& key,
                            std::optional<double> def) {
  bool found = false;
  const std::string v = raw(key, found);
  if (!found) {
    if (def) return *def;
    throw ConfigError("missing required key '" + key + "'");
  }
  double num = 0.0;
  std::string unit;
  if (!split_number_unit(v, num, unit))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "'");
  if (unit == "%") return num / 100.0;
  bad_unit(key, v, "%");
}

void Config::reject_unknown_keys() const {
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key))
      throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace cli
