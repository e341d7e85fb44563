#pragma once

#include <string>

namespace ellmem {

// Locale-independent %.{digits}g.
std::string fmt_g(double v, int digits = 15);
// Locale-independent fixed-point.
std::string fmt_fixed(double v, int decimals);

}  // namespace ellmem
