#pragma once

#include <stdexcept>
#include <string>

namespace pdstiep {

/// Base of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inadmissible user input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed on admissible input (CLI exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnpairedComplexError : public InputError {
 public:
  using InputError::InputError;
};

class MissingUnitEigenvalueError : public InputError {
 public:
  using InputError::InputError;
};

class NonPositiveInput : public InputError {
 public:
  using InputError::InputError;
};

class NonSquareInput : public InputError {
 public:
  using InputError::InputError;
};

class InterleavedClusterError : public InputError {
 public:
  using InputError::InputError;
};

class NotConverged : public NumericalError {
 public:
  NotConverged(const std::string& what, int iterations)
      : NumericalError(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class SchurFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateBlockError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularInputError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SpectraOverlapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CgBreakdown : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pdstiep
