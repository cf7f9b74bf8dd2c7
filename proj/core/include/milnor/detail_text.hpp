#pragma once

#include <sstream>
#include <string>

namespace milnor::detail {

// Builds a message from streamable parts (std::format is not available on
// every toolchain this library targets).
template <class... Parts>
std::string text(const Parts&... parts) {
  std::ostringstream out;
  out.precision(4);
  (out << ... << parts);
  return out.str();
}

}  // namespace milnor::detail
