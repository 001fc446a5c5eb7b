#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace argpair {

// Verbosity is the one thing controlled by environment (ARGPAIR_VERBOSE):
// 0 silences warnings/progress, 1 (default) warnings only, 2 adds progress.
inline int verbosity() {
  static int level = [] {
    const char* v = std::getenv("ARGPAIR_VERBOSE");
    if (!v) return 1;
    return std::atoi(v);
  }();
  return level;
}

inline void warn(const std::string& msg) {
  if (verbosity() >= 1) std::cerr << "[argpair] warning: " << msg << "\n";
}

inline void progress(const std::string& msg) {
  if (verbosity() >= 2) std::cerr << "[argpair] " << msg << "\n";
}

}  // namespace argpair
