#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operands live in different groups, have different dimensions, etc.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("enumeration needs " + std::to_string(required) +
              " items but the budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// A Taylor coefficient (or other element) is outside the filtration level it
/// must belong to.
class FiltrationError : public Error {
 public:
  FiltrationError(int index, const std::string& what)
      : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// The constructive lift failed at a quotient level; the input map is not a
/// morphism.
class LiftError : public Error {
 public:
  LiftError(int level, const std::string& what) : Error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace nilkit
