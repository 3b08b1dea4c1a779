#pragma once

#include <stdexcept>
#include <string>

namespace risfso
{
// Argument outside the mathematical domain of a function (pole, x <= 0, ...).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

// An evaluation that could not reach its tolerance or whose defining
// integral/series does not converge for the requested parameters.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Invalid user input: configuration files, CLI arguments, parameter sets.
class SchemaError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace risfso
