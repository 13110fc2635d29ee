#pragma once

#include <stdexcept>
#include <string>

namespace clutter {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Direction at grazing incidence where d(phi) = d_s / cos(phi) is unbounded.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Request lies outside the granularity or beamwidth the model was fitted at.
class ModelValidityError : public Error {
public:
    using Error::Error;
};

/// Series without variance where a normalized statistic was requested.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message, int line = 0)
        : Error(format(field, message, line)), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& message, int line)
    {
        std::string out = field.empty() ? message : field + ": " + message;
        if (line > 0)
            out += " (line " + std::to_string(line) + ")";
        return out;
    }

    std::string field_;
    int line_ = 0;
};

/// File could not be read, written or decoded.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace clutter
