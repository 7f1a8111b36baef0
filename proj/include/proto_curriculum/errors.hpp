#ifndef PROTO_CURRICULUM_ERRORS_HPP
#define PROTO_CURRICULUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace proto_curriculum {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Problems with input data or files (CLI exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

class FormatError : public DataError {
public:
    using DataError::DataError;
};

class ValidationError : public DataError {
public:
    using DataError::DataError;
};

class LengthMismatchError : public DataError {
public:
    using DataError::DataError;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

// Embedding/model dimensions disagree.
class ShapeError : public DataError {
public:
    using DataError::DataError;
};

// An assignment or stored index points outside its valid range.
class CorruptionError : public DataError {
public:
    using DataError::DataError;
};

// Numerical argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Davies-Bouldin requested with fewer than two non-empty clusters.
class UndefinedIndexError : public Error {
public:
    using Error::Error;
};

// Target effective fraction below what the temperature bracket can reach.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(const std::string& what, double lo, double hi)
        : Error(what), achievable_lo(lo), achievable_hi(hi) {}

    double achievable_lo;
    double achievable_hi;
};

// All scores equal, so the effective fraction does not depend on temperature.
class DegenerateDistributionError : public Error {
public:
    using Error::Error;
};

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_ERRORS_HPP
