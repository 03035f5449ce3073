#pragma once

#include <array>
#include <filesystem>
#include <istream>

namespace dsmark {

/// Parses 8 rows of 8 whitespace-separated numbers. Lines starting with '#'
/// are comments. Throws dsmark::Error on a wrong entry count or bad token.
std::array<double, 64> parse_table8x8(std::istream& in);
std::array<double, 64> load_table8x8(const std::filesystem::path& path);

}  // namespace dsmark
