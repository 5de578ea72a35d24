#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Bad or malformed configuration / arguments (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A certified bound or structural invariant failed at runtime (CLI exit code 3).
struct invariant_violation : std::runtime_error {
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

// Depth cap or memory budget exceeded (CLI exit code 4).
struct resource_limit : std::runtime_error {
  explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

// A point fell into a gap while coding it against the cylinder hierarchy.
struct gap_error : std::runtime_error {
  gap_error(const std::string& what, int level_) : std::runtime_error(what), level(level_) {}
  int level;
};

}  // namespace cantor
