#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace kickwig::csv {

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_real(double v);

/// Opens `path` for writing in binary mode ('\n' line ends) or throws Error
/// naming the path.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace kickwig::csv
