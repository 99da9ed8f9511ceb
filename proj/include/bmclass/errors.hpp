#ifndef BMCLASS_ERRORS_HPP
#define BMCLASS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmclass
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A computation refused to run because it would exceed a configured budget
/// (element cap, automorphism budget, enumeration budget, search-node cap).
class BudgetExceeded : public Error
{
public:
  using Error::Error;
};

class ElementCapExceeded : public BudgetExceeded
{
public:
  explicit ElementCapExceeded(std::size_t cap)
  : BudgetExceeded("group closure exceeds element cap " + std::to_string(cap))
  {}
};

class InvalidPermutation : public Error
{
public:
  using Error::Error;
};

class NotNormal : public Error
{
public:
  using Error::Error;
};

class UnknownName : public Error
{
public:
  using Error::Error;
};

class AmbiguousAction : public Error
{
public:
  using Error::Error;
};

class OrderNotInDatabase : public Error
{
public:
  explicit OrderNotInDatabase(std::size_t order)
  : Error("order " + std::to_string(order) + " is not covered by the database")
  {}
};

class CocycleInvalid : public Error
{
public:
  using Error::Error;
};

class NotCoequalized : public Error
{
public:
  using Error::Error;
};

class FactorNotPreserved : public Error
{
public:
  using Error::Error;
};

class DepthExceeded : public Error
{
public:
  using Error::Error;
};

/// Database file problems. All of them map to exit code 2 in the CLI.
class DataError : public Error
{
public:
  using Error::Error;
};

class ParseError : public DataError
{
public:
  ParseError(std::size_t line, std::string const &what)
  : DataError("line " + std::to_string(line) + ": " + what), _line(line)
  {}

  std::size_t line() const { return _line; }

private:
  std::size_t _line;
};

class OrderMismatch : public DataError
{
public:
  using DataError::DataError;
};

class DuplicateId : public DataError
{
public:
  using DataError::DataError;
};

} // namespace bmclass

#endif // BMCLASS_ERRORS_HPP
