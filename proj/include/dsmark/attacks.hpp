#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "dsmark/blockdct.hpp"
#include "dsmark/image.hpp"

namespace dsmark {

enum class AttackKind {
  None,
  Awgn,              ///< Gaussian noise on pixels, then 8-bit rounding
  AwgnCoefficients,  ///< Gaussian noise added straight to DCT coefficients
  Jpeg,              ///< transform-domain quantization with the scaled luminance table
};

struct AttackSpec {
  AttackKind kind = AttackKind::None;
  double noise_sigma = 5.0;
  int quality = 50;
  std::uint64_t seed = 0;

  void validate() const;
  /// Short label for reports: "none", "awgn(5)", "awgn-coef(5)", "jpeg(50)".
  std::string label() const;
};

AttackKind parse_attack_kind(std::string_view text);

using QuantTable = std::array<int, 64>;

/// Standard JPEG luminance table (ITU-T T.81 Annex K), natural order.
QuantTable jpeg_luminance_table();
QuantTable load_quant_table(const std::filesystem::path& path);

/// IJG quality scaling: scale = 5000/QF below 50, 200 - 2 QF otherwise;
/// step = clamp((table * scale + 50) / 100, 1, 255).
QuantTable jpeg_quant_steps(int quality, const QuantTable& base = jpeg_luminance_table());

/// The 64 noise samples awgn_block adds for `block_seed`, raster order.
void awgn_noise_block(double sigma, std::uint64_t block_seed, std::span<double, 64> out);
/// Pixels of one block after adding noise of deviation sigma, rounded and
/// clamped. `pixels` holds real values in raster order.
void awgn_block(std::span<const double, 64> pixels, double sigma, std::uint64_t block_seed,
                std::span<double, 64> out);

/// Quantize/dequantize the (level-shifted) coefficients of one block with
/// `steps`, inverse transform, round and clamp. `coefficients` is the
/// orthonormal DCT of the unshifted pixels.
void jpeg_block(std::span<const double, 64> coefficients, const QuantTable& steps, std::span<double, 64> out);

/// Seed used for the noise of block k of an attack with master `seed`.
std::uint64_t awgn_block_seed(std::uint64_t seed, std::size_t block);

Image attack_awgn(const Image& img, double sigma, std::uint64_t seed);
BlockSpectrum attack_awgn_coefficients(const BlockSpectrum& spec, double sigma, std::uint64_t seed);
Image attack_jpeg(const Image& img, int quality, const QuantTable& base = jpeg_luminance_table());

/// Applies an image-domain attack. AwgnCoefficients goes through the block
/// DCT and comes back rounded to 8 bits.
Image apply_attack(const Image& img, const AttackSpec& spec);

}  // namespace dsmark
