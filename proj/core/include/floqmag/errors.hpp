#pragma once

#include <stdexcept>
#include <string>

namespace floqmag {

// Raised when an operation's precondition is violated. `name()` is a stable
// machine-readable identifier (the CLI maps these to exit code 2).
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(const char* name, const std::string& what) {
    throw PreconditionError(name, what);
}

inline void require(bool cond, const char* name, const std::string& what) {
    if (!cond) fail(name, what);
}

}  // namespace floqmag
