#include "dsmark/blockdct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsmark/error.hpp"
#include "dsmark/kernels.hpp"

namespace dsmark {

namespace {

// Standard JPEG zigzag scan: entry p is the natural index at 0-based scan position p.
constexpr std::array<int, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  12, 19, 26, 33, 40, 48,
    41, 34, 27, 20, 13, 6,  7,  14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23,
    30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

void check_position(int position) {
  if (position < 1 || position > 64) {
    throw Error("zigzag position " + std::to_string(position) + " outside [1, 64]");
  }
}

struct BasisSet {
  std::array<Block, 64> b{};
  BasisSet() {
    const double* c = kernels::dct_matrix();
    for (int u = 0; u < 64; ++u) {
      const int i = u / 8;
      const int j = u % 8;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) b[u][y * 8 + x] = c[i * 8 + y] * c[j * 8 + x];
    }
  }
};

}  // namespace

int zigzag_to_natural(int position) {
  check_position(position);
  return kZigzag[position - 1];
}

int natural_to_zigzag(int natural_index) {
  if (natural_index < 0 || natural_index > 63) throw Error("natural index outside [0, 63]");
  const auto it = std::find(kZigzag.begin(), kZigzag.end(), natural_index);
  return static_cast<int>(it - kZigzag.begin()) + 1;
}

const Block& dct_basis(int natural_index) {
  static const BasisSet basis;
  return basis.b.at(natural_index);
}

double quantize_pixel(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

BlockSpectrum block_dct(const Image& img) {
  const auto& k = kernels::active();
  BlockSpectrum spec;
  spec.blocks_x = img.blocks_x();
  spec.blocks_y = img.blocks_y();
  spec.blocks.resize(static_cast<std::size_t>(img.block_count()));
  Block pix;
  for (int by = 0; by < spec.blocks_y; ++by) {
    for (int bx = 0; bx < spec.blocks_x; ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) pix[y * 8 + x] = img.at(bx * 8 + x, by * 8 + y);
      k.dct8x8(pix.data(), spec.blocks[by * spec.blocks_x + bx].data());
    }
  }
  return spec;
}

std::vector<double> block_idct_real(const BlockSpectrum& spec) {
  const auto& k = kernels::active();
  const int width = spec.blocks_x * 8;
  std::vector<double> out(static_cast<std::size_t>(width) * spec.blocks_y * 8);
  Block pix;
  for (int by = 0; by < spec.blocks_y; ++by) {
    for (int bx = 0; bx < spec.blocks_x; ++bx) {
      k.idct8x8(spec.blocks[by * spec.blocks_x + bx].data(), pix.data());
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) out[static_cast<std::size_t>(by * 8 + y) * width + bx * 8 + x] = pix[y * 8 + x];
    }
  }
  return out;
}

Image block_idct(const BlockSpectrum& spec) {
  const std::vector<double> real = block_idct_real(spec);
  std::vector<std::uint8_t> px(real.size());
  std::transform(real.begin(), real.end(), px.begin(),
                 [](double v) { return static_cast<std::uint8_t>(quantize_pixel(v)); });
  return Image(spec.blocks_x * 8, spec.blocks_y * 8, std::move(px));
}

HostVector zigzag_extract(const BlockSpectrum& spec, int position) {
  const int u = zigzag_to_natural(position);
  HostVector v(spec.blocks.size());
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) v[k] = spec.blocks[k][u];
  return v;
}

BlockSpectrum zigzag_insert(const BlockSpectrum& spec, int position, std::span<const double> v) {
  const int u = zigzag_to_natural(position);
  if (v.size() != spec.blocks.size()) {
    throw Error("zigzag_insert: vector length " + std::to_string(v.size()) + " != block count " +
                std::to_string(spec.blocks.size()));
  }
  BlockSpectrum out = spec;
  for (std::size_t k = 0; k < v.size(); ++k) out.blocks[k][u] = v[k];
  return out;
}

}  // namespace dsmark
