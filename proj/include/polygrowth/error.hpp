#pragma once

#include <stdexcept>
#include <string>

namespace polygrowth {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or precondition supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A request would exceed the configured vertex budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A search ran off the end of the data it was given.
class ExhaustedRange : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Function, domain or ball do not belong together (or a ball is too small).
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace polygrowth
