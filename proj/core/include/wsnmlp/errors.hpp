#pragma once

#include <stdexcept>
#include <string>

namespace wsnmlp {

// Error taxonomy mirrored by the command-line exit codes: configuration
// errors exit 2, dataset errors 3, training divergence 4.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& what) : std::runtime_error(what) {}
};

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace wsnmlp
