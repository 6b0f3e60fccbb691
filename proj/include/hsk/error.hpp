#pragma once

#include <stdexcept>
#include <string>

namespace hsk {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

// A forward evaluation produced NaN or Inf.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

// Operation requested in the wrong lifecycle state (e.g. backward before forward).
class StateError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Input data violates a precondition (empty set, all-zero signal, short sequence).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace hsk
