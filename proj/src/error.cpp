#include "grushin/error.hpp"

namespace grushin {

void require(bool condition, const std::string& invariant) {
  if (!condition) throw PreconditionError(invariant);
}

}  // namespace grushin
