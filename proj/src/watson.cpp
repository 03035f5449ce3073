#include "dsmark/watson.hpp"

#include <algorithm>
#include <cmath>

#include "dsmark/error.hpp"
#include "dsmark/table_io.hpp"

namespace dsmark {

SensitivityTable SensitivityTable::watson() {
  return from_values({
      1.40, 1.01, 1.16, 1.66, 2.40,  3.43,  4.79,  6.56,   //
      1.01, 1.45, 1.32, 1.52, 2.00,  2.71,  3.67,  4.93,   //
      1.16, 1.32, 2.24, 2.59, 2.98,  3.64,  4.60,  5.88,   //
      1.66, 1.52, 2.59, 3.77, 4.55,  5.30,  6.28,  7.60,   //
      2.40, 2.00, 2.98, 4.55, 6.15,  7.46,  8.71,  10.17,  //
      3.43, 2.71, 3.64, 5.30, 7.46,  9.62,  11.58, 13.51,  //
      4.79, 3.67, 4.60, 6.28, 8.71,  11.58, 14.50, 17.29,  //
      6.56, 4.93, 5.88, 7.60, 10.17, 13.51, 17.29, 21.15,
  });
}

SensitivityTable SensitivityTable::from_values(const std::array<double, 64>& values) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("sensitivity table entries must be positive");
  }
  return SensitivityTable{values};
}

SensitivityTable SensitivityTable::load(const std::filesystem::path& path) {
  return from_values(load_table8x8(path));
}

std::string_view to_string(MaskMode mode) {
  return mode == MaskMode::FrequencyLuminance ? "freq+lum" : "freq+lum+contrast";
}

MaskMode parse_mask_mode(std::string_view text) {
  if (text == "freq+lum") return MaskMode::FrequencyLuminance;
  if (text == "freq+lum+contrast") return MaskMode::FrequencyLuminanceContrast;
  throw Error("unknown mask mode '" + std::string(text) + "'");
}

void MaskParams::validate() const {
  if (!(luminance_exponent > 0.0)) throw Error("luminance exponent must be positive");
  for (double w : contrast_exponent) {
    if (!(w > 0.0 && w < 1.0)) throw Error("contrast exponent must lie in (0, 1)");
  }
}

namespace {

double checked_dc(double dc, int block, bool floor_dc) {
  if (dc > 0.0) return dc;
  if (floor_dc) return std::max(dc, MaskParams::kDcFloor);
  const std::string where = block >= 0 ? " in block " + std::to_string(block) : std::string();
  throw Error("non-positive DC coefficient" + where +
              "; luminance masking needs positive block means (enable DC flooring to override)");
}

double contrast(double m, double x, double w) { return std::max(m, std::pow(std::abs(x), w) * std::pow(m, 1.0 - w)); }

}  // namespace

double mean_dc(const BlockSpectrum& spec) {
  if (spec.blocks.empty()) throw Error("empty spectrum");
  double sum = 0.0;
  for (const auto& b : spec.blocks) sum += b[0];
  return sum / static_cast<double>(spec.blocks.size());
}

MaskSet luminance_mask(const SensitivityTable& table, const BlockSpectrum& spec, double exponent, bool floor_dc) {
  const double reference = mean_dc(spec);
  if (!(reference > 0.0)) throw Error("mean DC coefficient must be positive for luminance masking");
  MaskSet out;
  out.m.resize(spec.blocks.size());
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    const double dc = checked_dc(spec.blocks[k][0], static_cast<int>(k), floor_dc);
    const double scale = std::pow(dc / reference, exponent);
    for (int u = 0; u < 64; ++u) out.m[k][u] = table.t[u] * scale;
  }
  return out;
}

MaskSet contrast_mask(const MaskSet& lum, const BlockSpectrum& spec, const std::array<double, 64>& exponent) {
  if (lum.m.size() != spec.blocks.size()) throw Error("contrast_mask: mask and spectrum block counts differ");
  MaskSet out = lum;
  for (std::size_t k = 0; k < spec.blocks.size(); ++k)
    for (int u = 0; u < 64; ++u) out.m[k][u] = contrast(lum.m[k][u], spec.blocks[k][u], exponent[u]);
  return out;
}

MaskSet contrast_mask(const MaskSet& lum, const BlockSpectrum& spec, double exponent) {
  return contrast_mask(lum, spec, MaskParams::filled(exponent));
}

MaskVector mask_vector(const BlockSpectrum& spec, int position, const MaskParams& params,
                       const SensitivityTable& table) {
  params.validate();
  const int u = zigzag_to_natural(position);
  MaskSet set = luminance_mask(table, spec, params.luminance_exponent, params.floor_dc);
  if (params.mode == MaskMode::FrequencyLuminanceContrast) set = contrast_mask(set, spec, params.contrast_exponent);
  MaskVector v(set.m.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = set.m[k][u];
  return v;
}

double coefficient_threshold(const SensitivityTable& table, const MaskParams& params, int natural_index, double dc,
                             double reference_dc, double coefficient) {
  if (!(reference_dc > 0.0)) throw Error("mean DC coefficient must be positive for luminance masking");
  const double m = table.t[natural_index] *
                   std::pow(checked_dc(dc, -1, params.floor_dc) / reference_dc, params.luminance_exponent);
  if (params.mode == MaskMode::FrequencyLuminance) return m;
  return contrast(m, coefficient, params.contrast_exponent[natural_index]);
}

}  // namespace dsmark
