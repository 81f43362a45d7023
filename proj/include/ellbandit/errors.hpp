#pragma once

#include <stdexcept>
#include <string>

namespace ellbandit {

// Caller broke a documented precondition (dimension mismatch, index out of
// range, call past the horizon).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Recoverable failures raised by the numerical routines and the runner.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class ZeroParameter : public Error {
 public:
  using Error::Error;
};

class IncompleteDesign : public Error {
 public:
  using Error::Error;
};

class SingularDesign : public Error {
 public:
  using Error::Error;
};

class PolicyViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedActionSet : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// The const char* overload keeps hot-path checks allocation-free.
inline void require(bool condition, const char* what) {
  if (!condition) throw ContractViolation(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ContractViolation(what);
}

}  // namespace ellbandit
