#pragma once

#include <stdexcept>
#include <string>

namespace msre {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A vertex or point lies outside the domain an operation requires.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A numeric parameter is out of its admissible range.
class ParameterError : public Error
{
  public:
    using Error::Error;
};

/// An argument violates a documented contract (mismatched shapes, wrong
/// boundary values, ...).
class ContractError : public Error
{
  public:
    using Error::Error;
};

/// A requested operation is not available for the given configuration.
class UnsupportedError : public Error
{
  public:
    using Error::Error;
};

/// No finite-energy configuration exists, or a solve could not certify one.
class InfeasibleError : public Error
{
  public:
    using Error::Error;
};

/// The precondition of a statistical or solver routine does not hold.
class PreconditionError : public Error
{
  public:
    using Error::Error;
};

/// A problem would exceed the configured memory or state budget.
class ResourceError : public Error
{
  public:
    using Error::Error;
};

/// A run was refused because its estimated cost exceeds the budget.
class BudgetError : public ResourceError
{
  public:
    using ResourceError::ResourceError;
};

/// An iterative solver stopped before meeting its tolerance.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")")
        , residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

}  // namespace msre
