#pragma once

#include <stdexcept>
#include <string>

namespace transversal {

/// Raised when an argument violates a documented precondition (shape,
/// dimension, normalization, malformed input). The CLI maps it to exit 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a construction fails at run time: an exhausted rejection
/// sampler, a violated certificate, a degenerate intermediate subspace.
/// The CLI maps it to exit 3.
class AlgorithmError : public std::runtime_error {
 public:
  explicit AlgorithmError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace detail
}  // namespace transversal
