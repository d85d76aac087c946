#pragma once

#include <stdexcept>
#include <string>

namespace sikit {

// Domain errors: the inputs were understood but describe something we refuse
// to compute (non-monotonic grid, extrapolation request, aliasing TDR, ...).
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input at the boundary: bad option line, bad JSON shape, bad flag.
// The CLI maps these to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sikit
