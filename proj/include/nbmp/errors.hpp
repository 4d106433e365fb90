#pragma once

#include <stdexcept>
#include <string>

namespace nbmp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a mathematical precondition (nonpositive rate, m <= 1 where
/// the exponent 1/(m-1) is required, infeasible family, degenerate hull, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The caller asked for something that does not make sense (bad option,
/// orientation mismatch, nonpositive step, malformed document).
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace nbmp
