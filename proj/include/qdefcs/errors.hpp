#pragma once

#include <stdexcept>
#include <string>

namespace qdefcs {

// Base class for all numerical-domain failures raised by this library.
// Argument/usage errors (bad q, bad grid config) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// |z|^2 outside the convergence disc, or inside but beyond the configured
// guard fraction. The message states which of the two cases applies.
class OutOfDiscError : public Error {
 public:
  explicit OutOfDiscError(const std::string& what) : Error(what) {}
};

// No admissible truncation below the hard term cap.
class NonConvergentError : public Error {
 public:
  explicit NonConvergentError(const std::string& what) : Error(what) {}
};

// Observable undefined at the requested state (Mandel parameter at z = 0).
class DegenerateStateError : public Error {
 public:
  explicit DegenerateStateError(const std::string& what) : Error(what) {}
};

// Deformed-commutator parameters outside the supported branch.
class InvalidGupParamsError : public Error {
 public:
  explicit InvalidGupParamsError(const std::string& what) : Error(what) {}
};

}  // namespace qdefcs
