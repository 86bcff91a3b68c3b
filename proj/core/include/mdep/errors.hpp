#pragma once

#include <stdexcept>
#include <string>

namespace mdep {

// Caller supplied something that violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A result failed a post-condition the library guarantees. Indicates a bug.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mdep
