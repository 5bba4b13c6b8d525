#pragma once

#include <stdexcept>
#include <string>

namespace voldens {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public Error
{
public:
  using Error::Error;
};

/// Argument outside the numerically representable range of an operation.
class RangeError : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class InputError : public Error
{
public:
  using Error::Error;
};

class IndexError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

/// A quadrature or consistency check failed; carries the offending residual.
class NumericalFailure : public Error
{
public:
  NumericalFailure(const std::string& what, double residual)
    : Error(what + " (residual " + std::to_string(residual) + ")")
    , residual_(residual)
  {
  }

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace voldens
