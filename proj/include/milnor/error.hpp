#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace milnor {

/// Base class of every error thrown by the library. Carries the name of the
/// module that raised it and an optional remediation hint for the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what, std::string hint = {})
        : std::runtime_error(what), module_(std::move(module)), hint_(std::move(hint)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& hint() const noexcept { return hint_; }

private:
    std::string module_;
    std::string hint_;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& module, std::size_t expected, std::size_t got)
        : Error(module, "dimension mismatch: expected " + std::to_string(expected) + ", got " +
                            std::to_string(got)) {}
};

}  // namespace milnor
