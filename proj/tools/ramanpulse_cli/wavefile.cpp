#include "wavefile.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace cli {

namespace {

constexpr const char* kMagic = "# ramanpulse waveform";
constexpr double kIqTolerance = 1e-12;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw RunError("waveform file: cannot parse " + what + " from '" + text +
                   "'");
  }
}

}  // namespace

WaveFile read_wavefile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open waveform file '" + path + "'");

  WaveFile data;
  long long n = -1;
  bool have_dt = false, have_rabi = false, first = true;
  std::string line;
  size_t row = 0;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (first) {
      if (stripped != kMagic)
        throw RunError("'" + path + "' is not a waveform file (missing '" +
                       kMagic + "' header)");
      first = false;
      continue;
    }
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      const std::string body = trim(stripped.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;  // free-form comment
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (key == "n")
        n = static_cast<long long>(parse_double(value, "slice count"));
      else if (key == "dt_s") {
        data.dt = parse_double(value, "dt_s");
        have_dt = true;
      } else if (key == "rabi_frequency_hz") {
        data.rabi_frequency_hz = parse_double(value, "rabi_frequency_hz");
        have_rabi = true;
      } else {
        data.metadata.emplace_back(key, value);
      }
      continue;
    }

    std::istringstream fields(stripped);
    std::vector<std::string> cols;
    std::string tok;
    while (fields >> tok) cols.push_back(tok);
    if (cols.size() != 2 && cols.size() != 4)
      throw RunError("waveform file '" + path + "': data row '" + stripped +
                     "' has " + std::to_string(cols.size()) +
                     " columns (expected 2 or 4)");
    const auto index =
        static_cast<long long>(parse_double(cols[0], "row index"));
    if (index != static_cast<long long>(row))
      throw RunError("waveform file '" + path + "': row index " +
                     std::to_string(index) + " out of order (expected " +
                     std::to_string(row) + ")");
    const double phi = parse_double(cols[1], "phase");
    if (cols.size() == 4) {
      const double i_val = parse_double(cols[2], "i sample");
      const double q_val = parse_double(cols[3], "q sample");
      if (std::abs(i_val - std::sin(phi)) > kIqTolerance ||
          std::abs(q_val - std::cos(phi)) > kIqTolerance)
        throw RunError("waveform file '" + path + "': row " +
                       std::to_string(row) +
                       " I/Q samples disagree with the phase column");
      if (std::abs(i_val * i_val + q_val * q_val - 1.0) > kIqTolerance)
        throw RunError("waveform file '" + path + "': row " +
                       std::to_string(row) +
                       " I/Q samples are not on the unit circle");
    }
    data.phases.push_back(phi);
    ++row;
  }
  if (first)
    throw RunError("'" + path + "' is not a waveform file (empty)");
  if (!have_dt || !have_rabi)
    throw RunError("waveform file '" + path +
                   "': missing required header field (dt_s, "
                   "rabi_frequency_hz)");
  if (data.phases.empty())
    throw RunError("waveform file '" + path + "': no data rows");
  if (n >= 0 && static_cast<size_t>(n) != data.phases.size())
    throw RunError("waveform file '" + path + "': header declares n = " +
                   std::to_string(n) + " but " +
                   std::to_string(data.phases.size()) + " rows follow");
  if (!(data.dt > 0.0) || !std::isfinite(data.dt))
    throw RunError("waveform file '" + path + "': dt_s must be > 0");
  if (!(data.rabi_frequency_hz > 0.0) || !std::isfinite(data.rabi_frequency_hz))
    throw RunError("waveform file '" + path +
                   "': rabi_frequency_hz must be > 0");
  return data;
}

void write_wavefile(const std::string& path, const WaveFile& data) {
  std::ostringstream out;
  out << kMagic << "\n";
  out << "# n = " << data.phases.size() << "\n";
  out << "# rabi_frequency_hz = " << fmt(data.rabi_frequency_hz) << "\n";
  out << "# dt_s = " << fmt(data.dt) << "\n";
  for (const auto& [key, value] : data.metadata)
    out << "# " << key << " = " << value << "\n";
  out << "# columns: index phi_rad i q\n";
  for (size_t k = 0; k < data.phases.size(); ++k) {
    const double phi = data.phases[k];
    out << k << " " << fmt(phi) << " " << fmt(std::sin(phi)) << " "
        << fmt(std::cos(phi)) << "\n";
  }

  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << out.str();
  file.flush();
  if (!file) throw IoError("failed while writing '" + path + "'");
}

}  // namespace cli
