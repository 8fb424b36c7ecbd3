#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cli {

// Shared command-line arguments, filled by main() before dispatch.
struct CommonArgs {
  std::optional<std::string> config;   // -c/--config
  std::vector<std::string> overrides;  // --set key=value (repeatable)
  std::string output;                  // -o/--output (table / waveform file)
  std::optional<std::string> report;   // --report (optimize only)
};

void cmd_optimize(const CommonArgs& args);
void cmd_export_waveform(const CommonArgs& args);
void cmd_fringe_scan(const CommonArgs& args);
void cmd_spectral_scan(const CommonArgs& args);
void cmd_temporal_scan(const CommonArgs& args);
void cmd_contrast_map(const CommonArgs& args);
void cmd_verify(const std::string& waveform_path);

}  // namespace cli
