#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bayesab {

/// Raised for invalid inputs: bad parameters, violated invariants, malformed
/// experiment documents. Carries the offending field path when known
/// (e.g. "variants[2].conversions") so callers can point at the exact field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string message)
        : std::runtime_error(std::move(message)) {}

    ValidationError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
          field_(std::move(field_path)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bayesab
