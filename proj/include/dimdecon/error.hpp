#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dimdecon {

// Base of everything the library throws on bad input. Anything else escaping
// the library is an internal failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed external data (PBM headers, bit files, table files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Corrupt compressed stream.
class DecodeError : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

}  // namespace dimdecon
