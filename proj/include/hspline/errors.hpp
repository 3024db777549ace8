#pragma once

#include <stdexcept>
#include <string>

namespace hspline {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or cell lies outside the domain it is evaluated on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Green's function requested on (or numerically at) its diagonal.
class CoincidentPointsError : public Error {
public:
    using Error::Error;
};

/// Bad scalar argument: p < 1, delta outside (0,1], eps outside (0,1), ...
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DegenerateCellError : public Error {
public:
    using Error::Error;
};

/// Cell budget N cannot cover the intermediate block grid.
class BudgetError : public Error {
public:
    using Error::Error;
};

class UnknownFieldError : public Error {
public:
    using Error::Error;
};

/// Malformed gridded input (dimension, non-finite values, parse failure).
class GridFormatError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hspline
