#pragma once

#include <string>

namespace nrqed {

/// Decimal text with 17 significant digits, enough to read back the same double.
std::string format_double(double v);

}  // namespace nrqed
