#pragma once

#include <stdexcept>
#include <string>

namespace voltrip {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A required column is missing or an input file is structurally unusable.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// A primary key appears more than once in a table.
class DuplicateKeyError : public Error {
public:
  using Error::Error;
};

/// Numerical preconditions violated (empty input, zero variance, ...).
class DataError : public Error {
public:
  using Error::Error;
};

/// A trip fails the minimum-returns threshold; the caller records the
/// exclusion instead of aborting the batch.
class TripExcludedError : public Error {
public:
  using Error::Error;
};

/// The interior-point solver failed to reach the duality-gap tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace voltrip
