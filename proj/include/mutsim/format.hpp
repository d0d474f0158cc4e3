#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mutsim/integrate.hpp"

namespace mutsim {

// 17 significant digits, '.' separator, independent of the C locale.
std::string format_double(double v);

// Shortest representation that parses back to the same double.
std::string format_shortest(double v);

// Header `t,x,y`, LF line endings, no trailing whitespace.
std::string trajectory_csv(const Trajectory& traj);

// Writes bytes verbatim (binary mode), creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace mutsim
