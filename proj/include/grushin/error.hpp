#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

/// A caller violated an operation's precondition. The message names the
/// violated invariant so that the CLI can report it verbatim.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced a non-finite value or lost the accuracy it promises.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

void require(bool condition, const std::string& invariant);

}  // namespace grushin
