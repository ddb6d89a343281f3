#pragma once

#include <stdexcept>
#include <string>

namespace mscc {

// Exit-code contract of the CLI: 1 usage, 2 data, 3 numeric degeneracy.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mscc
