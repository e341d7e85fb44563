#include "ellmem/common.hpp"

#include <cmath>

namespace ellmem {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite ") + what);
}

}  // namespace ellmem
