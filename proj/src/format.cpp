#include "orgsim/format.hpp"

#include <array>
#include <charconv>

namespace orgsim {

std::string format_roundtrip(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string format_fixed(double value, int digits) {
  std::array<char, 64> buf{};
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, digits);
  return std::string(buf.data(), end);
}

}  // namespace orgsim
