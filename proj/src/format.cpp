#include "nrqed/format.hpp"

#include <charconv>
#include <system_error>

namespace nrqed {

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (r.ec != std::errc()) return "nan";
  return std::string(buf, r.ptr);
}

}  // namespace nrqed
