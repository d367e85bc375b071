#pragma once

#include <array>
#include <string>

namespace tr {

// True iff the expression parses over {+, -, *, /, parentheses}, uses each
// of the four given numbers exactly once as a literal, and evaluates to 24
// within 1e-6. Unicode multiplication/division signs are accepted. Any parse
// failure is a rejection, not an exception.
bool validate_game24(const std::string& expression, const std::array<int, 4>& numbers);

} // namespace tr
