#ifndef QDF_ERRORS_HPP
#define QDF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdf
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a data invariant (helicity bounds, duplicate keys, ...).
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// Argument outside the domain of an operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Numerical failure that is a property of the data, e.g. an undefined phase.
class NumericalError : public Error
{
public:
    using Error::Error;
};

} // namespace qdf

#endif
