#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexdrift {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(std::string const& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line)
    {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class IndexFormatError : public Error {
public:
    using Error::Error;
};

} // namespace lexdrift
