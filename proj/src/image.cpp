#include "dsmark/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "dsmark/error.hpp"

namespace dsmark {

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0 || width % 8 != 0 || height % 8 != 0) {
    throw Error("image dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                " are not positive multiples of 8");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error("pixel buffer size does not match image dimensions");
  }
}

Image::Image(int width, int height)
    : Image(width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)))) {}

namespace {

// Next header integer, skipping whitespace and '#' comments.
long read_header_int(std::istream& in, const char* field) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  if (ch == EOF || !std::isdigit(ch)) throw Error(std::string("malformed PGM header: bad ") + field);
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1'000'000) throw Error(std::string("malformed PGM header: ") + field + " too large");
    ch = in.get();
  }
  if (ch == EOF || !std::isspace(ch)) throw Error(std::string("malformed PGM header after ") + field);
  return value;
}

}  // namespace

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') {
    throw Error("malformed PGM header: expected P5 magic in " + path.string());
  }
  const long width = read_header_int(in, "width");
  const long height = read_header_int(in, "height");
  const long maxval = read_header_int(in, "maxval");
  if (maxval != 255) throw Error("unsupported PGM maxval " + std::to_string(maxval) + " (need 255)");
  if (width % 8 != 0 || height % 8 != 0 || width == 0 || height == 0) {
    throw Error("PGM " + path.string() + " is " + std::to_string(width) + "x" + std::to_string(height) +
                ", not a multiple of the 8x8 block size");
  }
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width * height));
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size()) throw Error("truncated PGM payload in " + path.string());
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void save_pgm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.pixels().size()));
  if (!out) throw Error("write failed for " + path.string());
}

double psnr(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw Error("psnr: image sizes differ");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    const double d = static_cast<double>(a.pixels()[i]) - b.pixels()[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.pixels().size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace dsmark
