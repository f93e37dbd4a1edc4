#pragma once

#include <stdexcept>
#include <string>

namespace nonlocal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the range where a formula or object is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input: inconsistent measure, bad config, invalid grid.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A quadrature, linear solve or statistical estimate did not reach its target.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The requested combination is valid but not implemented for this input class.
class Unsupported : public Error {
public:
    using Error::Error;
};

}  // namespace nonlocal
