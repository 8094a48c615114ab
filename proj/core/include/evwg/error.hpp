#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evwg {

/// Input lies outside the region where a formula is defined (below the
/// critical angle, below the potential minimum, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure could not reach its requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested quantity is unbounded for the given input (e.g. a revival
/// time for an isochronous spectrum).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed binary grid file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration parse or validation failure. `line()` is 0 when the error is
/// not tied to a particular line; `key()` is empty when not tied to a key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::string key = {})
      : std::runtime_error(what), line_(line), key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

}  // namespace evwg
