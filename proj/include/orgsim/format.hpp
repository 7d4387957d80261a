#pragma once

#include <string>

namespace orgsim {

/// Shortest text that parses back to exactly `value`.
std::string format_roundtrip(double value);

/// Fixed notation with `digits` decimals.
std::string format_fixed(double value, int digits);

}  // namespace orgsim
