#pragma once

#include <string>

namespace smd {

// Shortest decimal string that round-trips the exact double.
std::string format_double(double v);

}  // namespace smd
