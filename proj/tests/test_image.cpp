#include <cmath>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "dsmark/error.hpp"
#include "dsmark/image.hpp"
#include "support.hpp"

using namespace dsmark;

namespace {
void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}
}  // namespace

TEST_CASE("PGM save and load round trip") {
  const auto dir = testing::scratch_dir("image");
  const Image img = testing::random_image(16, 24, 1);
  save_pgm(img, dir / "a.pgm");
  CHECK(load_pgm(dir / "a.pgm") == img);
}

TEST_CASE("PGM header comments are skipped") {
  const auto dir = testing::scratch_dir("image_comments");
  std::string body(64, '\x07');
  write_file(dir / "c.pgm", "P5\n# made by hand\n8 # width\n8\n255\n" + body);
  const Image img = load_pgm(dir / "c.pgm");
  CHECK(img.width() == 8);
  CHECK(img.at(3, 3) == 7);
}

TEST_CASE("malformed PGM files are rejected") {
  const auto dir = testing::scratch_dir("image_bad");
  write_file(dir / "p2.pgm", "P2\n8 8\n255\n0 0 0\n");
  write_file(dir / "deep.pgm", "P5\n8 8\n65535\n" + std::string(128, '\0'));
  write_file(dir / "odd.pgm", "P5\n10 8\n255\n" + std::string(80, '\0'));
  write_file(dir / "short.pgm", "P5\n8 8\n255\n" + std::string(10, '\0'));
  CHECK_THROWS_AS(load_pgm(dir / "p2.pgm"), Error);
  CHECK_THROWS_AS(load_pgm(dir / "deep.pgm"), Error);
  CHECK_THROWS_AS(load_pgm(dir / "odd.pgm"), Error);
  CHECK_THROWS_AS(load_pgm(dir / "short.pgm"), Error);
  CHECK_THROWS_AS(load_pgm(dir / "missing.pgm"), Error);
}

TEST_CASE("image dimensions must be positive multiples of 8") {
  CHECK_THROWS_AS(Image(12, 8), Error);
  CHECK_THROWS_AS(Image(0, 8), Error);
  CHECK_THROWS_AS(Image(8, 8, std::vector<std::uint8_t>(63)), Error);
  const Image ok(16, 8);
  CHECK(ok.block_count() == 2);
}

TEST_CASE("psnr") {
  const Image a = testing::constant_image(8, 8, 100);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
  Image b = a;
  for (auto& p : b.pixels()) p = 101;
  // MSE = 1
  CHECK(psnr(a, b) == doctest::Approx(20.0 * std::log10(255.0)));
  CHECK_THROWS_AS(psnr(a, Image(16, 8)), Error);
}
