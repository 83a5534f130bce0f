#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qmicro {

/// Shortest round-trip decimal form of v; integral values print plainly.
std::string format_double(double v);

/// Fixed decimal form for prose output.
std::string format_fixed(double v, int decimals);

std::string csv_row(const std::vector<std::string>& cells);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace qmicro
