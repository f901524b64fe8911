#pragma once

#include <stdexcept>
#include <string>

namespace mlunify {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllSorted : public Error {
 public:
  explicit IllSorted(const std::string& what) : Error("ill-sorted: " + what) {}
};

class SortMismatch : public Error {
 public:
  explicit SortMismatch(const std::string& what) : Error("sort mismatch: " + what) {}
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& name) : Error("unknown symbol: " + name) {}
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

class NotATerm : public Error {
 public:
  explicit NotATerm(const std::string& what) : Error("not a term pattern: " + what) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class AlreadyFailed : public Error {
 public:
  AlreadyFailed() : Error("unification problem is already the failure problem") {}
};

class StepLimitExceeded : public Error {
 public:
  using Error::Error;
};

class UnassignedVariable : public Error {
 public:
  explicit UnassignedVariable(const std::string& name) : Error("unassigned variable: " + name) {}
};

class CarrierTooLarge : public Error {
 public:
  using Error::Error;
};

class NoInjectiveInterpretation : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class NotSolved : public Error {
 public:
  NotSolved() : Error("unification failed; no certificate can be generated") {}
};

class NotMgu : public Error {
 public:
  using Error::Error;
};

class BadInstantiation : public Error {
 public:
  using Error::Error;
};

class TautologyBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mlunify
