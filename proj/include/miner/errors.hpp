#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace miner {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: config values, alias maps, CLI arguments, malformed data.
/// Mapped to exit code 1 by the CLI.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the 1-based line number of the offending line.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Snapshot document violates the schema; carries the JSON path of the
/// offending field (e.g. "issues[3].closed_at").
class SchemaError : public ValidationError {
public:
    SchemaError(const std::string& path, const std::string& message)
        : ValidationError(path + ": " + message), path_(path), message_(message) {}

    const std::string& path() const { return path_; }
    const std::string& message() const { return message_; }

private:
    std::string path_;
    std::string message_;
};

/// No contributor was active in the study window; raised instead of dividing
/// by zero further down the pipeline.
class EmptyWindowError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A statistic was requested over an empty sample or selection.
class EmptySampleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// I/O failure (unreadable file, unwritable directory). Exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

/// Base for failures while talking to the tracker API; carries the URL that
/// failed. Exit code 2.
class FetchError : public Error {
public:
    FetchError(const std::string& url, const std::string& what)
        : Error(what + " (url: " + url + ")"), url_(url) {}

    const std::string& url() const { return url_; }

private:
    std::string url_;
};

class AuthError : public FetchError {
public:
    using FetchError::FetchError;
};

class RateLimitError : public FetchError {
public:
    using FetchError::FetchError;
};

class TransportError : public FetchError {
public:
    using FetchError::FetchError;
};

class PayloadError : public FetchError {
public:
    using FetchError::FetchError;
};

}  // namespace miner
