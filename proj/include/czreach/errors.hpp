// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_ERRORS_HPP_
#define CZREACH_ERRORS_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace czreach
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
    public:
        using Error::Error;
};

/// Raised when a function is evaluated outside its domain (log of a
/// non-positive interval, division by an interval containing zero, ...).
/// Carries the offending factor index when raised during graph evaluation.
class DomainError : public Error
{
    public:
        explicit DomainError(const std::string& what, std::optional<std::size_t> factor = std::nullopt)
            : Error(factor ? what + " (factor " + std::to_string(*factor + 1) + ")" : what), factor_(factor)
        {
        }

        std::optional<std::size_t> factor() const { return factor_; }

    private:
        std::optional<std::size_t> factor_;
};

class DivisionByZeroInterval : public DomainError
{
    public:
        using DomainError::DomainError;
};

class NumericalFailure : public Error
{
    public:
        using Error::Error;
};

class EmptySet : public Error
{
    public:
        using Error::Error;
};

/// Parse errors carry the 0-based character offset of the offending token.
class SyntaxError : public Error
{
    public:
        SyntaxError(const std::string& what, std::size_t position)
            : Error(what + " at position " + std::to_string(position)), position_(position)
        {
        }

        std::size_t position() const { return position_; }

    private:
        std::size_t position_;
};

class UnknownIdentifier : public SyntaxError
{
    public:
        using SyntaxError::SyntaxError;
};

class NonIntegerExponent : public SyntaxError
{
    public:
        using SyntaxError::SyntaxError;
};

} // namespace czreach

#endif
