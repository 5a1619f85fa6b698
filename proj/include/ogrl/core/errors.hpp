#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ogrl {

/// Raised when a vector or matrix argument has the wrong length.
class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(const std::string& context, std::size_t expected, std::size_t actual)
        : std::invalid_argument(context + ": expected length " + std::to_string(expected) +
                                ", got " + std::to_string(actual)),
          expected_(expected),
          actual_(actual)
    {
    }

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

/// A caller broke an operation's precondition (e.g. stepping a finished episode).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class FormatErrorKind { io, bad_magic, version_mismatch, truncated, checksum_mismatch, malformed };

const char* to_string(FormatErrorKind kind) noexcept;

/// Failure while reading or writing one of the binary file formats.
class FormatError : public std::runtime_error {
public:
    FormatError(FormatErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    FormatErrorKind kind() const noexcept { return kind_; }

private:
    FormatErrorKind kind_;
};

} // namespace ogrl
