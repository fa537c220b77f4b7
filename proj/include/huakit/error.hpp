#pragma once

#include <stdexcept>
#include <string>

namespace huakit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not agree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A spectrum (or scalar argument) lies outside a function's domain.
class DomainError : public Error {
  public:
    DomainError(const std::string& what, double offending)
        : Error(what), offending_(offending) {}

    double offending_value() const noexcept { return offending_; }

  private:
    double offending_;
};

/// Inverse requested on a spectrum touching zero.
class SingularityError : public Error {
  public:
    SingularityError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  private:
    double min_eigenvalue_;
};

/// Jacobi iteration ran out of sweeps.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double off_diagonal_residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// A verifier or generator was handed an instance violating its hypotheses.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Unrecognized tag, identifier or file schema.
class LookupError : public Error {
  public:
    using Error::Error;
};

}  // namespace huakit
