#pragma once

#include <stdexcept>
#include <string>

namespace srg {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input that the caller can fix: unknown attribute, illegal scheme, bad config.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input files: ragged rows, empty tables.
class StructuralError : public Error {
public:
    StructuralError(const std::string & what, long row = -1) :
        Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Raised when a caller-supplied oracle breaks its promised contract (e.g. monotonicity).
class ContractViolation : public Error {
public:
    using Error::Error;
};

}
