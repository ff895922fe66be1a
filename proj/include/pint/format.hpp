#pragma once

#include <string>

namespace pint {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Strict parse of a whole string as a double; false on any leftover text.
bool parse_double(const std::string& text, double& out);

}  // namespace pint
