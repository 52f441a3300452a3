#pragma once

#include <stdexcept>
#include <string>

namespace claimbias {

// Problems with input files or their contents. The CLI maps these to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or violated numerical invariants. CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace claimbias
