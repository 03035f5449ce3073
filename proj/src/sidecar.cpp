#include "dsmark/sidecar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "dsmark/blockdct.hpp"
#include "dsmark/error.hpp"
#include "dsmark/harness.hpp"
#include "dsmark/random.hpp"
#include "dsmark/stats.hpp"

namespace dsmark {

namespace {

constexpr std::uint64_t kPermutationStream = 0x7065726d;
constexpr std::uint64_t kWatermarkStream = 0x776d;
constexpr std::uint64_t kCalibrationStream = 0x63616c;

constexpr const char* kKeys[] = {"seed", "scheme", "a", "N", "mask_mode", "zigzag_index"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("corrupt sidecar: bad value '" + text + "' for " + key);
  }
  return v;
}

MaskParams mask_params(const Sidecar& s) {
  MaskParams p;
  p.mode = s.mask_mode;
  return p;
}

struct Key {
  std::vector<std::uint32_t> blocks;
  Watermark w;
};

Key make_key(std::uint64_t seed, std::size_t block_count, int n) {
  return {embedding_blocks(seed, block_count, n), generate_watermark(n, derive_seed(seed, kWatermarkStream))};
}

std::vector<double> gather(std::span<const double> all, std::span<const std::uint32_t> idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = all[idx[i]];
  return out;
}

}  // namespace

void Sidecar::validate() const {
  if (n < 2 || n % 2 != 0) throw Error("N must be even and at least 2");
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error("embedding strength a must be finite and non-negative");
  if (zigzag_index < 2 || zigzag_index > 64) throw Error("zigzag index must lie in [2, 64]");
}

void Sidecar::check_against(const Image& img) const {
  if (n > img.block_count()) {
    throw Error("sidecar N = " + std::to_string(n) + " exceeds the image's " + std::to_string(img.block_count()) +
                " blocks");
  }
}

void write_sidecar(std::ostream& out, const Sidecar& s) {
  s.validate();
  out << "seed=" << s.seed << '\n'
      << "scheme=" << to_string(s.scheme) << '\n'
      << "a=" << format_double(s.a) << '\n'
      << "N=" << s.n << '\n'
      << "mask_mode=" << to_string(s.mask_mode) << '\n'
      << "zigzag_index=" << s.zigzag_index << '\n';
}

void save_sidecar(const Sidecar& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_sidecar(out, s);
  if (!out) throw Error("write failed for " + path.string());
}

Sidecar parse_sidecar(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("corrupt sidecar: line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw Error("corrupt sidecar: unknown key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) throw Error("corrupt sidecar: duplicate key '" + key + "'");
  }
  for (const char* k : kKeys) {
    if (!kv.count(k)) throw Error(std::string("corrupt sidecar: missing key '") + k + "'");
  }
  Sidecar s;
  s.seed = parse_number<std::uint64_t>("seed", kv["seed"]);
  s.a = parse_number<double>("a", kv["a"]);
  s.n = parse_number<int>("N", kv["N"]);
  s.zigzag_index = parse_number<int>("zigzag_index", kv["zigzag_index"]);
  try {
    s.scheme = parse_scheme(kv["scheme"]);
    s.mask_mode = parse_mask_mode(kv["mask_mode"]);
    s.validate();
  } catch (const Error& e) {
    throw Error(std::string("corrupt sidecar: ") + e.what());
  }
  return s;
}

Sidecar load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open sidecar " + path.string());
  return parse_sidecar(in);
}

std::vector<std::uint32_t> embedding_blocks(std::uint64_t seed, std::size_t block_count, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > block_count) throw Error("N exceeds the number of blocks");
  std::vector<std::uint32_t> order(block_count);
  for (std::size_t i = 0; i < block_count; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng(derive_seed(seed, kPermutationStream));
  rng.partial_shuffle(std::span<std::uint32_t>(order), static_cast<std::size_t>(n));
  order.resize(static_cast<std::size_t>(n));
  return order;
}

Watermark embedding_watermark(const Sidecar& s) { return generate_watermark(s.n, derive_seed(s.seed, kWatermarkStream)); }

EmbedResult embed_image(const Image& original, const Sidecar& s, const SensitivityTable& table) {
  s.validate();
  s.check_against(original);
  const BlockSpectrum spec = block_dct(original);
  const int u = zigzag_to_natural(s.zigzag_index);
  const HostVector x_all = zigzag_extract(spec, s.zigzag_index);
  const MaskVector m_all = mask_vector(spec, s.zigzag_index, mask_params(s), table);
  const Key key = make_key(s.seed, spec.blocks.size(), s.n);
  const HostVector x = gather(x_all, key.blocks);
  const MaskVector m = gather(m_all, key.blocks);

  HostVector y;
  switch (s.scheme) {
    case Scheme::AssCor:
    case Scheme::Hernandez:
    case Scheme::Briassouli:
      y = embed_ass(x, key.w, s.a, m);
      break;
    case Scheme::DsAss:
      y = embed_dsass(x, key.w, s.a, m);
      break;
    case Scheme::DsCauchy:
      y = embed_dscauchy(x, key.w, s.a, m, fit_cauchy(x_all).gamma);
      break;
  }

  std::vector<double> pixels = block_idct_real(spec);
  const Block& basis = dct_basis(u);
  const int width = original.width();
  for (std::size_t i = 0; i < key.blocks.size(); ++i) {
    const double delta = y[i] - x[i];
    const int bx = static_cast<int>(key.blocks[i]) % spec.blocks_x;
    const int by = static_cast<int>(key.blocks[i]) / spec.blocks_x;
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) {
        pixels[static_cast<std::size_t>((by * 8 + r) * width + bx * 8 + c)] += delta * basis[r * 8 + c];
      }
  }
  std::vector<std::uint8_t> out(pixels.size());
  std::transform(pixels.begin(), pixels.end(), out.begin(), quantize_pixel);
  EmbedResult res{Image(original.width(), original.height(), std::move(out)), 0.0};
  res.psnr = psnr(original, res.image);
  return res;
}

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::Correlator: return "correlator";
    case Detector::Ggd: return "ggd";
    case Detector::Cauchy: return "cauchy";
  }
  return "?";
}

Detector parse_detector(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (s == "correlator") return Detector::Correlator;
  if (s == "ggd") return Detector::Ggd;
  if (s == "cauchy") return Detector::Cauchy;
  throw Error("unknown detector '" + std::string(name) + "' (expected correlator, ggd or cauchy)");
}

Detector detector_for(Scheme s) {
  switch (s) {
    case Scheme::AssCor:
    case Scheme::DsAss:
      return Detector::Correlator;
    case Scheme::Hernandez:
      return Detector::Ggd;
    case Scheme::Briassouli:
    case Scheme::DsCauchy:
      return Detector::Cauchy;
  }
  return Detector::Correlator;
}

DetectionResult detect_image(const Image& received, const Sidecar& s, const DetectOptions& opts) {
  s.validate();
  s.check_against(received);
  if (opts.psi.has_value() == opts.p_fa.has_value()) throw Error("give exactly one of psi or p_fa");
  if (opts.original && (opts.original->width() != received.width() || opts.original->height() != received.height())) {
    throw Error("original and received images differ in size");
  }
  const Detector det = opts.detector.value_or(detector_for(s.scheme));
  const Rule rule = rule_for(s.scheme);
  const BlockSpectrum spec = block_dct(received);
  const HostVector y_all = zigzag_extract(spec, s.zigzag_index);
  const std::size_t blocks = spec.blocks.size();

  MaskVector m_all;
  GgdParams ggd;
  CauchyParams cauchy;
  if (det == Detector::Ggd) {
    m_all = opts.original ? mask_vector(block_dct(*opts.original), s.zigzag_index, mask_params(s), opts.table)
                          : mask_vector(spec, s.zigzag_index, mask_params(s), opts.table);
    ggd = fit_ggd(y_all);
  }
  if (det == Detector::Cauchy) cauchy = fit_cauchy(y_all);

  const auto statistic = [&](const Key& key) {
    const HostVector y = gather(y_all, key.blocks);
    switch (det) {
      case Detector::Correlator: return detect_correlator(y, key.w);
      case Detector::Ggd: return detect_ggd(y, key.w, s.a, gather(m_all, key.blocks), ggd.c);
      case Detector::Cauchy: return detect_cauchy(y, key.w, cauchy.gamma);
    }
    return 0.0;
  };

  double psi = 0.0;
  if (opts.psi) {
    psi = *opts.psi;
  } else {
    if (opts.calibration_keys < 1) throw Error("calibration needs at least one key");
    std::vector<double> h0(static_cast<std::size_t>(opts.calibration_keys));
    for (std::size_t i = 0; i < h0.size(); ++i) {
      h0[i] = statistic(make_key(derive_seed(s.seed, kCalibrationStream, i), blocks, s.n));
    }
    psi = empirical_threshold(h0, *opts.p_fa, rule);
  }
  return decide(statistic(make_key(s.seed, blocks, s.n)), psi, rule);
}

}  // namespace dsmark
