#ifndef TAXMINER_ERRORS_H
#define TAXMINER_ERRORS_H

#include <stdexcept>
#include <string>

namespace taxminer {

// Invalid input data or model state; maps to exit code 1 in the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& message) : std::runtime_error(message) {}
};

// Caller misuse (bad flags, bad parameter values); maps to exit code 2 in the CLI.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

}

#endif
