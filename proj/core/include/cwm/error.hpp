#pragma once

#include <stdexcept>
#include <string>

namespace cwm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid caller-supplied values (non-finite data, out-of-range parameters, bad specs).
class InputError : public Error {
public:
    using Error::Error;
};

/// Mismatched or unsupported dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Requested operation is not defined for the given model.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Internal invariant violated; indicates a bug rather than bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace cwm
