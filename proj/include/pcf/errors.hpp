#pragma once

#include <stdexcept>
#include <string>

namespace pcf {

// Base of every error raised by the library. Callers that only care about
// "this item failed" catch Error; the subclasses exist so the gateway can
// tell retriable failures apart from configuration mistakes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed judge output: no structured block, not JSON, wrong field types.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed judge output whose content breaks an invariant
// (score out of range, duplicate ranks, wrong record count).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Transport failure after the retry budget is spent.
class BackendError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcf
