#pragma once

#include <stdexcept>
#include <string>

namespace kz {

/// Input data violates a structural invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A query reaches beyond the degrees in which the truncated data are exact.
struct WindowError : std::runtime_error {
  WindowError(const std::string& what, int max_safe) : std::runtime_error(what), max_safe_degree(max_safe) {}
  int max_safe_degree;
};

/// An operation was called without its mathematical preconditions.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kz
