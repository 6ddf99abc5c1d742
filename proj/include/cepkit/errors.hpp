#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cepkit {

/// Broad failure category, used by the CLI to pick an exit code
/// (input -> 2, numerical -> 3, non-convergence -> 4).
enum class ErrorCategory { Input, Numerical, NonConvergence };

/// Toolkit error: a machine-readable error class (e.g. "MalformedRow")
/// plus a human-readable detail message.
class Error : public std::runtime_error {
public:
    Error(std::string error_class, ErrorCategory category, const std::string& detail)
        : std::runtime_error(error_class + ": " + detail),
          error_class_(std::move(error_class)),
          category_(category) {}

    const std::string& error_class() const noexcept { return error_class_; }
    ErrorCategory category() const noexcept { return category_; }

    static Error input(std::string error_class, const std::string& detail) {
        return Error(std::move(error_class), ErrorCategory::Input, detail);
    }
    static Error numerical(std::string error_class, const std::string& detail) {
        return Error(std::move(error_class), ErrorCategory::Numerical, detail);
    }
    static Error non_convergence(std::string error_class, const std::string& detail) {
        return Error(std::move(error_class), ErrorCategory::NonConvergence, detail);
    }

private:
    std::string error_class_;
    ErrorCategory category_;
};

}  // namespace cepkit
