#pragma once

#include <stdexcept>
#include <string>

namespace usertype {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration or usage: unknown enum token, invalid option value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problems with input data: conflicting labels, degenerate training sets,
/// unreadable or malformed resource files.
class DataError : public Error {
public:
    using Error::Error;
};

/// A single malformed record. Stream processing catches these, skips the
/// line and keeps a tally; batch loaders may let them propagate.
class RecordParseError : public DataError {
public:
    RecordParseError(const std::string& what, std::size_t line_number = 0)
        : DataError(line_number > 0
                        ? "line " + std::to_string(line_number) + ": " + what
                        : what),
          line_number_(line_number) {}

    std::size_t line_number() const { return line_number_; }

private:
    std::size_t line_number_;
};

/// Model artifact problems: unsupported format version or corrupt payload.
class ModelIoError : public DataError {
public:
    enum class Kind { version_mismatch, corrupt, io };

    ModelIoError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// A broken internal invariant. Seeing one of these is a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace usertype
