#pragma once

#include <stdexcept>
#include <string>

namespace tvrobust {

// Precondition or contract violation on otherwise well-typed input
// (mismatched shapes, unknown variables, invalid row sets, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model document. `location` is either "line L, column C" for
// syntax errors or a JSON pointer such as "/cpts/2/rows/1" for field errors.
class ModelError : public std::runtime_error {
 public:
  ModelError(std::string location, const std::string& message)
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace tvrobust
