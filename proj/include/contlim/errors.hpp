#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace contlim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dimensions or mismatched operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (non-CPTP channel, bad density matrix, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An eigenvalue sits on the closed negative real axis, so the principal log is undefined.
class BranchCutError : public NumericalError {
 public:
  BranchCutError(const std::string& what, std::complex<double> eigenvalue, long multiplicity)
      : NumericalError(what), eigenvalue_(eigenvalue), multiplicity_(multiplicity) {}

  std::complex<double> eigenvalue() const { return eigenvalue_; }
  long multiplicity() const { return multiplicity_; }

 private:
  std::complex<double> eigenvalue_;
  long multiplicity_;
};

// Range and kernel fail to be complementary.
class DefectiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace contlim
