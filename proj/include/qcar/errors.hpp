#pragma once

#include <stdexcept>
#include <string>

namespace qcar {

/// Bad user-supplied configuration, arguments, or paths. Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown while running (diverging integration, all candidates unstable, ...).
/// Mapped to exit code 2 by the CLI.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcar
