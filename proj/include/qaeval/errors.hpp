#pragma once

#include <stdexcept>
#include <string>

namespace qaeval {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input content (CSV rows, config files). Messages carry the
// source name and line number where known.
class ParseError : public Error {
public:
    using Error::Error;
};

// Violated precondition or domain constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem failure (missing file, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qaeval
