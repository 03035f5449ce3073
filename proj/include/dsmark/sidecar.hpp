#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dsmark/image.hpp"
#include "dsmark/schemes.hpp"
#include "dsmark/watson.hpp"

namespace dsmark {

/// Everything a detector needs to regenerate an embedding key.
/// Serialized as `key=value` lines: seed, scheme, a, N, mask_mode, zigzag_index.
struct Sidecar {
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::DsAss;
  double a = 1.0;
  int n = 2000;
  MaskMode mask_mode = MaskMode::FrequencyLuminance;
  int zigzag_index = 5;

  void validate() const;
  /// Throws if the image has fewer than N blocks.
  void check_against(const Image& img) const;
};

void write_sidecar(std::ostream& out, const Sidecar& s);
void save_sidecar(const Sidecar& s, const std::filesystem::path& path);
/// Rejects unknown or duplicate keys, missing keys and malformed values.
Sidecar parse_sidecar(std::istream& in);
Sidecar load_sidecar(const std::filesystem::path& path);

/// Block indices carrying the watermark: the first N of a seeded
/// permutation of all blocks.
std::vector<std::uint32_t> embedding_blocks(std::uint64_t seed, std::size_t block_count, int n);
Watermark embedding_watermark(const Sidecar& s);

struct EmbedResult {
  Image image;
  double psnr = 0.0;
};

/// Embeds with the sidecar's scheme. The perturbation is added to the
/// pixels in real arithmetic and rounded once at the end.
EmbedResult embed_image(const Image& original, const Sidecar& s,
                        const SensitivityTable& table = SensitivityTable::watson());

enum class Detector { Correlator, Ggd, Cauchy };
std::string_view to_string(Detector d);
Detector parse_detector(std::string_view name);
/// Detector and decision rule a scheme is paired with.
Detector detector_for(Scheme s);

struct DetectOptions {
  std::optional<Detector> detector;    ///< default: detector_for(sidecar.scheme)
  std::optional<double> psi;
  std::optional<double> p_fa;          ///< calibrate psi from random keys
  int calibration_keys = 1000;
  /// Unwatermarked original; when present its masks are used, otherwise
  /// masks are recomputed from the received image.
  const Image* original = nullptr;
  SensitivityTable table = SensitivityTable::watson();
};

/// Regenerates the key from the sidecar, computes the statistic on the
/// received image and applies the scheme's decision rule.
DetectionResult detect_image(const Image& received, const Sidecar& s, const DetectOptions& opts);

}  // namespace dsmark
