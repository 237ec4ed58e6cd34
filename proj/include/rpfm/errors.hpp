#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpfm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A pivot fell below the absolute singularity floor during factorization.
class SingularMatrix : public Error {
public:
    SingularMatrix(std::size_t column, double pivot, double floor)
        : Error("singular matrix: pivot " + std::to_string(pivot) + " in column " +
                std::to_string(column) + " below floor " + std::to_string(floor)),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// The predicted merit reduction vanished, so the trust-region ratio is undefined.
class DegenerateRatio : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace rpfm
