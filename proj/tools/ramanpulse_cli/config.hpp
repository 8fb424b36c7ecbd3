#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cli {

// Duration that may be expressed in absolute units or in pi-pulse times.
struct TimeValue {
  double value = 0.0;  // seconds, or multiples of t_pi when tpi is true
  bool tpi = false;
};

// key = value configuration with mandatory unit suffixes on dimensioned
// quantities:
//   frequencies   Hz | kHz | MHz        (cyclic; converted to rad/s by use)
//   times         s | ms | us | ns | tpi
//   temperatures  K | mK | uK
//   angles        rad | pi
//   fractions     %
// Counts, seeds, weights and other dimensionless numbers are bare. Unknown
// and duplicate keys are rejected.
class Config {
 public:
  // Parses a file (IoError when unreadable) plus key=value overrides.
  static Config load(const std::string& path,
                     const std::vector<std::string>& overrides);
  static Config from_overrides(const std::vector<std::string>& overrides);

  bool has(const std::string& key) const;

  long long get_int(const std::string& key, std::optional<long long> def = {});
  unsigned long long get_seed(const std::string& key,
                              unsigned long long def = 0);
  double get_double(const std::string& key, std::optional<double> def = {});
  bool get_bool(const std::string& key, std::optional<bool> def = {});
  std::string get_string(const std::string& key,
                         std::optional<std::string> def = {});
  std::string get_enum(const std::string& key,
                       const std::vector<std::string>& allowed,
                       std::optional<std::string> def = {});

  double get_frequency_hz(const std::string& key,
                          std::optional<double> def_hz = {});
  TimeValue get_time(const std::string& key, std::optional<TimeValue> def = {});
  double get_temperature_k(const std::string& key,
                           std::optional<double> def_k = {});
  double get_angle_rad(const std::string& key,
                       std::optional<double> def_rad = {});
  double get_fraction(const std::string& key, std::optional<double> def = {});

  // Throws ConfigError when any key was never consumed by a getter.
  void reject_unknown_keys() const;

 private:
  std::string raw(const std::string& key, bool& found);
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace cli
