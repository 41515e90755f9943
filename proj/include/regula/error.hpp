#pragma once

#include <stdexcept>
#include <string>

namespace regula {

/// Failure categories. The command-line front end maps them onto its
/// exit codes (config 2, data 3, precondition 4).
enum class ErrorKind { Config, Data, Precondition };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed or unreadable configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Inconsistent data: shape mismatches, invalid weights, alphabet or label
/// mismatches, malformed files.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// Valid data on which an operation's precondition does not hold.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

}  // namespace regula
