#pragma once

#include <stdexcept>
#include <string>

namespace motioneval {

// Input bytes could not be decoded into the requested structure.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Decoded data or a configuration value violates a documented contract.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested computation has no defined result for the given data
// (coincident points, zero-variance samples and the like).
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace motioneval
