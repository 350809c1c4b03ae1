#pragma once

#include <stdexcept>
#include <string>

namespace evofss {

// Ingestion / dataset problems. The CLI maps these to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad command lines or config files. The CLI maps these to exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evofss
