#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace earreact {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Strict: the whole field must be a finite number. Throws ParseError.
double parse_double(std::string_view s);
/// Shortest round-trip decimal representation.
std::string format_number(double v);
std::string to_lower(std::string_view s);

}  // namespace earreact
