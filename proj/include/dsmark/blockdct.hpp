#pragma once

#include <array>
#include <span>
#include <vector>

#include "dsmark/image.hpp"

namespace dsmark {

/// 64 coefficients of one 8x8 block in natural (row-major) order:
/// element 8*i + j holds x(i, j) with i the vertical frequency.
using Block = std::array<double, 64>;

/// Per-block DCT coefficients of an image, blocks in raster order.
struct BlockSpectrum {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<Block> blocks;

  int block_count() const { return static_cast<int>(blocks.size()); }
};

using HostVector = std::vector<double>;

/// Zigzag position (1-based, DC = 1) to natural index 8*i + j.
int zigzag_to_natural(int position);
/// Natural index to 1-based zigzag position.
int natural_to_zigzag(int natural_index);

/// Orthonormal 2-D type-II DCT of every 8x8 block.
BlockSpectrum block_dct(const Image& img);

/// Inverse transform without quantization: real-valued pixels in raster
/// order, width = 8*blocks_x.
std::vector<double> block_idct_real(const BlockSpectrum& spec);

/// Inverse transform, rounded half away from zero and clamped to [0, 255].
Image block_idct(const BlockSpectrum& spec);

/// Element k is the coefficient at zigzag `position` of block k.
HostVector zigzag_extract(const BlockSpectrum& spec, int position);

/// Copy of `spec` with zigzag `position` of block k replaced by v[k].
BlockSpectrum zigzag_insert(const BlockSpectrum& spec, int position, std::span<const double> v);

/// Orthonormal DCT basis image for natural index u: pixel (y, x) of the
/// inverse transform of a unit coefficient at u.
const Block& dct_basis(int natural_index);

/// Round half away from zero and clamp to the 8-bit range.
double quantize_pixel(double v);

}  // namespace dsmark
