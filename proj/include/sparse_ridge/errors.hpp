#pragma once

#include <stdexcept>
#include <string>

namespace sridge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A support larger than the sparsity budget was requested.
class BudgetExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The requested objective level lies below the unconstrained ridge minimum.
class InfeasibleLevel : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A combinatorial enumeration would exceed its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Some 1 - (H_S)_ii is numerically zero, so the GCV score is undefined.
class DegenerateHat : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sridge
