#pragma once

#include <stdexcept>
#include <string>

namespace cli {

// Exit codes: 0 success, 2 configuration error, 3 runtime/verification
// failure, 4 file I/O error.
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitIo = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cli
