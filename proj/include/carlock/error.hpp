#pragma once

#include <stdexcept>
#include <string>

namespace carlock {

// Domain-level failure (bad precondition, numerical verification failure).
// Input-format problems use ParseError / StateFileError instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class StateFileError : public std::runtime_error {
public:
    explicit StateFileError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace carlock
