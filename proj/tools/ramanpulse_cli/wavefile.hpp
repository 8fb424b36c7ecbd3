#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cli {

// On-disk waveform: phase slices plus the drive parameters needed to play
// them back, with optional provenance metadata preserved in file order.
struct WaveFile {
  std::vector<double> phases;      // radians, one per slice
  double dt = 0.0;                 // seconds per slice
  double rabi_frequency_hz = 0.0;  // cyclic Rabi frequency
  std::vector<std::pair<std::string, std::string>> metadata;
};

// Parses a waveform file. Four-column rows carry redundant I/Q samples
// (i = sin(phi), q = cos(phi)) which are checked against the phase column;
// two-column rows (index, phi) are accepted and the I/Q pair regenerated.
// Unreadable file -> IoError; malformed content or inconsistent I/Q ->
// RunError.
WaveFile read_wavefile(const std::string& path);

// Writes the file atomically with respect to content: everything is
// formatted first and only then written, so a failure never leaves a
// truncated file behind. Unwritable destination -> IoError.
void write_wavefile(const std::string& path, const WaveFile& data);

}  // namespace cli
