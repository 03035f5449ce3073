#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dsmark {

/// 8-bit grayscale image whose sides are multiples of the 8x8 block size.
class Image {
 public:
  Image() = default;
  /// Throws dsmark::Error unless width and height are positive multiples of 8
  /// and `pixels` holds exactly width*height samples.
  Image(int width, int height, std::vector<std::uint8_t> pixels);
  /// Zero-filled image.
  Image(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int blocks_x() const { return width_ / 8; }
  int blocks_y() const { return height_ / 8; }
  int block_count() const { return blocks_x() * blocks_y(); }

  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Reads a binary (P5) PGM with maxval 255. Header comments are allowed.
Image load_pgm(const std::filesystem::path& path);
void save_pgm(const Image& img, const std::filesystem::path& path);

/// Peak signal-to-noise ratio in dB; +inf for identical images.
double psnr(const Image& a, const Image& b);

}  // namespace dsmark
