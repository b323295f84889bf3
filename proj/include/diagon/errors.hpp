#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diagon {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands of incompatible sizes (variable counts, matrix dimensions).
class DimensionError : public Error {
public:
    using Error::Error;
};

// A value violates an operation's precondition: zero polynomial, wrong degree, singular matrix...
class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// The diagonalization pipeline could not complete (degenerate rank, non-diagonalizing transform).
class PipelineError : public Error {
public:
    using Error::Error;
};

// An enumeration would visit more points than the configured ceiling allows.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

class NoFitError : public Error {
public:
    using Error::Error;
};

} // namespace diagon
