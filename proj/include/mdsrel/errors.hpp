#pragma once

#include <stdexcept>
#include <string>

namespace mdsrel
{

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// An iterative procedure (quadrature, root bracketing) did not converge.
class NonConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A quantity that must be representable vanished even in log space.
class NumericOverflowError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A closed form hit a pole.
class SingularityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A requested simulation exceeds the configured sample budget.
class CapacityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Every point of a derived curve was discarded.
class EmptyCurveError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace mdsrel
