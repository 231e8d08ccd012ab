#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sepcurv {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside a declared domain, or an intermediate that is not finite.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Gradient or height derivative below the regularity threshold.
class RegularityError : public Error {
public:
    using Error::Error;
};

/// Height solve failed (no sign change, no convergence).
class RootError : public Error {
public:
    using Error::Error;
};

} // namespace sepcurv
