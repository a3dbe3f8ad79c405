#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rko {

/// An exhaustive oracle refused an instance that is too large to enumerate.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(const std::string& what, double estimate, double limit)
      : std::runtime_error(what), estimate_(estimate), limit_(limit) {}

  double estimate() const noexcept { return estimate_; }
  double limit() const noexcept { return limit_; }

 private:
  double estimate_;
  double limit_;
};

/// Malformed input. `location` is a line number ("line 12") or a JSON path
/// ("t[1][3]") depending on the format.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& location, const std::string& message)
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        location_(location) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace rko
