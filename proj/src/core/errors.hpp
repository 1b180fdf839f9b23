#pragma once

#include <stdexcept>
#include <string>

namespace bsnap {

// Host-level errors raised by the toolchain itself (not MiniLang-level
// exceptions, which are values flowing through the interpreter).
struct Error : std::runtime_error {
    explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

struct LexError : Error {
    int line, col;
    LexError(std::string msg, int line_, int col_)
        : Error(std::move(msg)), line(line_), col(col_) {}
};

struct ParseError : Error {
    int line, col;
    ParseError(std::string msg, int line_, int col_)
        : Error(std::move(msg)), line(line_), col(col_) {}
};

struct ManifestError : Error {
    using Error::Error;
};

struct LinkError : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct TruncatedSnapshot : FormatError {
    using FormatError::FormatError;
};

struct FingerprintMismatch : Error {
    using Error::Error;
};

struct SerializeError : Error {
    using Error::Error;
};

struct TestIdMismatch : Error {
    using Error::Error;
};

struct UnknownTarget : Error {
    using Error::Error;
};

struct EmptyMatrix : Error {
    using Error::Error;
};

}  // namespace bsnap
