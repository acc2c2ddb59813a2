#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace powerlocal {

/// Raised when an input lies outside an operation's domain. `code()` is a
/// stable machine-readable tag (e.g. "not_unit", "ramified") that the CLI
/// forwards verbatim in its error object.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string code, const std::string& message)
      : std::domain_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace powerlocal
