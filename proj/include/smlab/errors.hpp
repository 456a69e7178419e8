#pragma once

#include <stdexcept>
#include <string>

namespace smlab {

/// Raised when an argument is outside an operation's domain.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a pair of partitions is required to be at split-merge distance
/// one and is not.
struct NotNeighbors : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive computation would exceed its size guard.
struct ResourceGuard : std::length_error {
  using std::length_error::length_error;
};

}  // namespace smlab
