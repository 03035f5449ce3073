#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dsmark/blockdct.hpp"

namespace dsmark {

/// Frequency-sensitivity thresholds t(i, j), natural order, all positive.
struct SensitivityTable {
  std::array<double, 64> t{};

  /// Watson's DCT threshold table as reproduced in Cox, Miller & Bloom,
  /// "Digital Watermarking", Table 7.2.
  static SensitivityTable watson();
  /// Throws dsmark::Error if any entry is non-positive.
  static SensitivityTable from_values(const std::array<double, 64>& values);
  static SensitivityTable load(const std::filesystem::path& path);
};

enum class MaskMode { FrequencyLuminance, FrequencyLuminanceContrast };

std::string_view to_string(MaskMode mode);
/// Accepts "freq+lum" and "freq+lum+contrast".
MaskMode parse_mask_mode(std::string_view text);

struct MaskParams {
  double luminance_exponent = 0.649;
  /// Per-frequency contrast-masking exponent w(i, j) in (0, 1).
  std::array<double, 64> contrast_exponent = filled(0.7);
  MaskMode mode = MaskMode::FrequencyLuminance;
  /// Replace non-positive DC terms by kDcFloor instead of failing.
  bool floor_dc = false;

  static constexpr double kDcFloor = 1e-6;

  static std::array<double, 64> filled(double w) {
    std::array<double, 64> a{};
    a.fill(w);
    return a;
  }
  void validate() const;
};

/// Per-block 8x8 JND thresholds m(i, j, k).
struct MaskSet {
  std::vector<Block> m;
};

using MaskVector = std::vector<double>;

/// Mean of the DC terms over all blocks.
double mean_dc(const BlockSpectrum& spec);

/// m(i,j,k) = t(i,j) * (x(0,0,k) / mean DC)^a_T.
MaskSet luminance_mask(const SensitivityTable& table, const BlockSpectrum& spec, double exponent,
                       bool floor_dc = false);

/// m'(i,j,k) = max(m, |x(i,j,k)|^w * m^(1-w)).
MaskSet contrast_mask(const MaskSet& lum, const BlockSpectrum& spec, const std::array<double, 64>& exponent);
MaskSet contrast_mask(const MaskSet& lum, const BlockSpectrum& spec, double exponent);

/// Full mask set for params.mode, then the zigzag `position` of every block.
MaskVector mask_vector(const BlockSpectrum& spec, int position, const MaskParams& params,
                       const SensitivityTable& table = SensitivityTable::watson());

/// Threshold for a single coefficient at natural index u given its block's
/// DC term and the reference mean DC. Same rules as mask_vector; used to
/// recompute masks at the detector without materializing a MaskSet.
double coefficient_threshold(const SensitivityTable& table, const MaskParams& params, int natural_index,
                             double dc, double reference_dc, double coefficient);

}  // namespace dsmark
