#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace opfid::csv {

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double x);

/// Single-column CSV with a one-line header; LF endings.
void write_column(const std::filesystem::path& path, const std::string& header,
                  const std::vector<double>& values);

/// Reads a single-column CSV written by write_column (one header line).
std::vector<double> read_column(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace opfid::csv
