#pragma once

#include <stdexcept>
#include <string>

namespace carla {

// Bad or inconsistent input data (missing files, shape mismatches, ...).
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during training/evaluation (non-finite loss, ...).
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Bad command line / configuration. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace carla
