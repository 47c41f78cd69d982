#pragma once

#include <stdexcept>
#include <string>

namespace mvfc {

/// Invalid configuration or arguments (bad counts, out-of-range options).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data violates a contract: unparseable CSV cells, labels outside
/// {0,1}, a class with no samples where both are required, etc.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvfc
