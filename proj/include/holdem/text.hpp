#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace holdem {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
/// Strict parse of the whole string; throws InvalidInput on junk.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

}  // namespace holdem
