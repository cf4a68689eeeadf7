#pragma once

#include <stdexcept>
#include <string>

namespace qftqkd {

/// Thrown when a request exceeds a hard resource ceiling (register width,
/// exact-enumeration size). Callers that can fall back to sampling catch this;
/// the CLI maps it to its own exit code.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qftqkd
