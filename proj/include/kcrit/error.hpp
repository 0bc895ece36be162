#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcrit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph6 / DIMACS input. `offset` is the byte (graph6) or line (DIMACS) where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A documented precondition of an operation does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exponential oracles refuse inputs above the configured vertex limit.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// A result failed its own validation; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace kcrit
