#pragma once

#include <fmt/format.h>

#include <string>

namespace octwalk::detail {

/// CSV number format: 12 significant digits, '.' separator.
inline std::string csv_number(double x) { return fmt::format("{:.12g}", x); }

} // namespace octwalk::detail
