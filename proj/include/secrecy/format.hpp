#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace secrecy {

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// Rounded to `digits` significant digits, for labels only.
std::string format_label(double value, int digits = 10);

/// Strict full-string parse; accepts "inf", "-inf".
bool parse_number(std::string_view text, double& out);

std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace secrecy
