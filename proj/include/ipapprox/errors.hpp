#pragma once

#include <stdexcept>
#include <string>

namespace ipapprox {

/// A configured search or enumeration limit was hit. Never silently
/// replaced by an approximate answer.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant that the algorithms guarantee did not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The instance is outside what a pipeline supports (e.g. an all-zero
/// column in a block's local constraint matrix).
class UnsupportedInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ipapprox
