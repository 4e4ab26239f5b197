// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_ERROR_HPP
#define WHARRAY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wharray
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Bad input: admissibility, indices, parse failures.
class ValidationError : public Error
{
public:
  using Error::Error;
};

// Driving pole sits on a kernel singularity.
class ResonanceError : public Error
{
public:
  using Error::Error;
};

class NumericalError : public Error
{
public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

// Process exit status for an exception escaping a command: 2 validation, 3 resonance,
// 4 numerical, 1 anything else.
int exit_code_for(const std::exception &e);

} // namespace wharray

#endif
