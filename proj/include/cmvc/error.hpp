#pragma once

#include <stdexcept>
#include <string>

namespace cmvc {

// Error categories map onto CLI exit codes: config=2, data=3, invariant=4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace cmvc
