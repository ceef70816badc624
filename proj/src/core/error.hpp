#pragma once

#include <stdexcept>
#include <string>

namespace sdc {

// Error categories map one-to-one onto C API status codes and CLI exit codes:
// usage -> exit 2, runtime and budget -> exit 1.
enum class ErrorKind { usage, runtime, budget };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& message) {
    throw Error(ErrorKind::usage, message);
}

[[noreturn]] inline void throw_runtime(const std::string& message) {
    throw Error(ErrorKind::runtime, message);
}

[[noreturn]] inline void throw_budget(const std::string& message) {
    throw Error(ErrorKind::budget, message);
}

} // namespace sdc
