#include "dsmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dsmark/error.hpp"
#include "dsmark/kernels.hpp"
#include "dsmark/random.hpp"
#include "dsmark/table_io.hpp"

namespace dsmark {

namespace {

constexpr std::uint64_t kAwgnStream = 0x61776e;  // "awn"
// DC of a constant block of 128 under the orthonormal DCT.
constexpr double kLevelShiftDc = 8.0 * 128.0;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void AttackSpec::validate() const {
  if (!(noise_sigma >= 0.0)) throw Error("noise sigma must be non-negative");
  if (quality < 1 || quality > 100) throw Error("JPEG quality must lie in [1, 100]");
}

std::string AttackSpec::label() const {
  switch (kind) {
    case AttackKind::None:
      return "none";
    case AttackKind::Awgn:
      return "awgn(" + format_number(noise_sigma) + ")";
    case AttackKind::AwgnCoefficients:
      return "awgn-coef(" + format_number(noise_sigma) + ")";
    case AttackKind::Jpeg:
      return "jpeg(" + std::to_string(quality) + ")";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "none") return AttackKind::None;
  if (text == "awgn") return AttackKind::Awgn;
  if (text == "awgn-coef") return AttackKind::AwgnCoefficients;
  if (text == "jpeg") return AttackKind::Jpeg;
  throw Error("unknown attack '" + std::string(text) + "'");
}

QuantTable jpeg_luminance_table() {
  return {16, 11, 10, 16, 24,  40,  51,  61,   //
          12, 12, 14, 19, 26,  58,  60,  55,   //
          14, 13, 16, 24, 40,  57,  69,  56,   //
          14, 17, 22, 29, 51,  87,  80,  62,   //
          18, 22, 37, 56, 68,  109, 103, 77,   //
          24, 35, 55, 64, 81,  104, 113, 92,   //
          49, 64, 78, 87, 103, 121, 120, 101,  //
          72, 92, 95, 98, 112, 100, 103, 99};
}

QuantTable load_quant_table(const std::filesystem::path& path) {
  const auto values = load_table8x8(path);
  QuantTable t{};
  for (int i = 0; i < 64; ++i) {
    if (values[i] != std::floor(values[i]) || values[i] < 1 || values[i] > 255) {
      throw Error("quantization table entries must be integers in [1, 255]");
    }
    t[i] = static_cast<int>(values[i]);
  }
  return t;
}

QuantTable jpeg_quant_steps(int quality, const QuantTable& base) {
  if (quality < 1 || quality > 100) throw Error("JPEG quality must lie in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  QuantTable steps{};
  for (int i = 0; i < 64; ++i) steps[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return steps;
}

std::uint64_t awgn_block_seed(std::uint64_t seed, std::size_t block) { return derive_seed(seed, kAwgnStream, block); }

void awgn_noise_block(double sigma, std::uint64_t block_seed, std::span<double, 64> out) {
  BlockRng rng(block_seed);
  for (int i = 0; i < 64; ++i) out[i] = sigma * rng.normal();
}

void awgn_block(std::span<const double, 64> pixels, double sigma, std::uint64_t block_seed, std::span<double, 64> out) {
  Block noise;
  awgn_noise_block(sigma, block_seed, noise);
  for (int i = 0; i < 64; ++i) out[i] = quantize_pixel(pixels[i] + noise[i]);
}

void jpeg_block(std::span<const double, 64> coefficients, const QuantTable& steps, std::span<double, 64> out) {
  Block q;
  for (int i = 0; i < 64; ++i) {
    const double c = i == 0 ? coefficients[i] - kLevelShiftDc : coefficients[i];
    q[i] = std::round(c / steps[i]) * steps[i];
  }
  q[0] += kLevelShiftDc;
  Block pix;
  kernels::active().idct8x8(q.data(), pix.data());
  for (int i = 0; i < 64; ++i) out[i] = quantize_pixel(pix[i]);
}

namespace {

template <typename Fn>
Image map_blocks(const Image& img, Fn&& fn) {
  Image out(img.width(), img.height());
  Block in;
  Block res;
  for (int by = 0; by < img.blocks_y(); ++by) {
    for (int bx = 0; bx < img.blocks_x(); ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) in[y * 8 + x] = img.at(bx * 8 + x, by * 8 + y);
      fn(static_cast<std::size_t>(by * img.blocks_x() + bx), in, res);
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) out.at(bx * 8 + x, by * 8 + y) = static_cast<std::uint8_t>(res[y * 8 + x]);
    }
  }
  return out;
}

}  // namespace

Image attack_awgn(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error("noise sigma must be non-negative");
  if (sigma == 0.0) return img;
  return map_blocks(img, [&](std::size_t k, const Block& in, Block& out) {
    awgn_block(in, sigma, awgn_block_seed(seed, k), out);
  });
}

BlockSpectrum attack_awgn_coefficients(const BlockSpectrum& spec, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error("noise sigma must be non-negative");
  BlockSpectrum out = spec;
  for (std::size_t k = 0; k < out.blocks.size(); ++k) {
    BlockRng rng(awgn_block_seed(seed, k));
    for (double& c : out.blocks[k]) c += sigma * rng.normal();
  }
  return out;
}

Image attack_jpeg(const Image& img, int quality, const QuantTable& base) {
  const QuantTable steps = jpeg_quant_steps(quality, base);
  const auto& kern = kernels::active();
  return map_blocks(img, [&](std::size_t, const Block& in, Block& out) {
    Block coeffs;
    kern.dct8x8(in.data(), coeffs.data());
    jpeg_block(coeffs, steps, out);
  });
}

Image apply_attack(const Image& img, const AttackSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case AttackKind::None:
      return img;
    case AttackKind::Awgn:
      return attack_awgn(img, spec.noise_sigma, spec.seed);
    case AttackKind::AwgnCoefficients:
      return block_idct(attack_awgn_coefficients(block_dct(img), spec.noise_sigma, spec.seed));
    case AttackKind::Jpeg:
      return attack_jpeg(img, spec.quality);
  }
  return img;
}

}  // namespace dsmark
