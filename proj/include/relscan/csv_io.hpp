#pragma once

#include <filesystem>
#include <string>

#include "relscan/series.hpp"

namespace relscan {

// One numeric value per row, optional single leading header line "value",
// decimal point only. Malformed or non-finite rows raise invalid_input with
// the 1-based row number.
TimeSeries read_series_csv(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target, so the target
// is never observed half-written.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// Shortest representation that round-trips to 15 significant digits.
std::string format_value(double v);

}  // namespace relscan
