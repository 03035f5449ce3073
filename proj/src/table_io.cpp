#include "dsmark/table_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "dsmark/error.hpp"

namespace dsmark {

std::array<double, 64> parse_table8x8(std::istream& in) {
  std::array<double, 64> t{};
  std::size_t count = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string token;
    while (row >> token) {
      if (count >= 64) throw Error("table has more than 64 entries");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw Error("bad table entry '" + token + "'");
      t[count++] = v;
    }
  }
  if (count != 64) throw Error("table has " + std::to_string(count) + " entries, expected 64");
  return t;
}

std::array<double, 64> load_table8x8(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table file " + path.string());
  return parse_table8x8(in);
}

}  // namespace dsmark
