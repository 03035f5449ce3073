#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dsmark/attacks.hpp"
#include "dsmark/error.hpp"
#include "support.hpp"

using namespace dsmark;

namespace {

/// Reference JPEG round trip of one block: direct-sum DCT, level shift,
/// uniform quantization, direct-sum inverse, round and clamp.
/// Sets `tie` when a coefficient sits on a rounding midpoint, where the
/// two implementations may legitimately round differently.
std::vector<double> reference_jpeg_block(const std::vector<double>& px, const QuantTable& steps, bool& tie) {
  std::vector<double> shifted(px);
  for (double& v : shifted) v -= 128.0;
  auto c = testing::brute_force_dct(shifted);
  tie = false;
  for (int i = 0; i < 64; ++i) {
    const double r = c[i] / steps[i];
    tie = tie || std::abs(std::abs(r - std::trunc(r)) - 0.5) < 1e-9;
    c[i] = std::round(r) * steps[i];
  }
  std::vector<double> out(64);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
          const double au = u == 0 ? std::sqrt(0.125) : 0.5;
          const double av = v == 0 ? std::sqrt(0.125) : 0.5;
          s += au * av * c[u * 8 + v] * std::cos((2 * y + 1) * u * std::numbers::pi / 16) *
               std::cos((2 * x + 1) * v * std::numbers::pi / 16);
        }
      out[y * 8 + x] = std::clamp(std::round(s + 128.0), 0.0, 255.0);
    }
  return out;
}

}  // namespace

TEST_CASE("IJG quality scaling") {
  const QuantTable base = jpeg_luminance_table();
  CHECK(jpeg_quant_steps(50) == base);
  const QuantTable q100 = jpeg_quant_steps(100);
  for (int s : q100) CHECK(s == 1);
  const QuantTable q25 = jpeg_quant_steps(25);
  for (int i = 0; i < 64; ++i) CHECK(q25[i] == std::min(255, base[i] * 2));
  const QuantTable q75 = jpeg_quant_steps(75);
  CHECK(q75[0] == 8);   // (16*50+50)/100
  CHECK(q75[1] == 6);   // (11*50+50)/100
  const QuantTable q1 = jpeg_quant_steps(1);
  for (int s : q1) CHECK(s == 255);
  CHECK_THROWS_AS(jpeg_quant_steps(0), Error);
  CHECK_THROWS_AS(jpeg_quant_steps(101), Error);
  CHECK(load_quant_table(testing::data_path("jpeg_luma_table.txt")) == base);
}

TEST_CASE("JPEG attack matches a direct-sum reference") {
  const Image img = load_pgm(testing::image_path("lena"));
  for (int quality : {10, 50, 90}) {
    CAPTURE(quality);
    const Image out = attack_jpeg(img, quality);
    const QuantTable steps = jpeg_quant_steps(quality);
    int mismatches = 0;
    int ties = 0;
    for (int b = 0; b < img.block_count(); b += 7) {
      const int bx = b % img.blocks_x(), by = b / img.blocks_x();
      std::vector<double> px(64);
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) px[y * 8 + x] = img.at(bx * 8 + x, by * 8 + y);
      bool tie = false;
      const auto ref = reference_jpeg_block(px, steps, tie);
      if (tie) {
        ++ties;
        continue;
      }
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          const double got = out.at(bx * 8 + x, by * 8 + y);
          if (got != ref[y * 8 + x]) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
    CHECK(ties < img.block_count() / 70);
  }
}

TEST_CASE("JPEG attack on flat and natural images") {
  // Level shift puts mid-grey on DC = 0, which every step reproduces.
  const Image grey = testing::constant_image(16, 16, 128);
  CHECK(attack_jpeg(grey, 50) == grey);
  CHECK(attack_jpeg(grey, 5) == grey);
  // 77 -> shifted DC -408 = -25.5 steps of 16 -> -26 steps -> 76.
  const Image flat = testing::constant_image(16, 16, 77);
  CHECK(attack_jpeg(flat, 50) == testing::constant_image(16, 16, 76));
  const Image img = load_pgm(testing::image_path("barbara"));
  CHECK(psnr(img, attack_jpeg(img, 100)) > 45.0);
  CHECK(psnr(img, attack_jpeg(img, 90)) > psnr(img, attack_jpeg(img, 30)));
}

TEST_CASE("JPEG block quantizes the DC step at quality 50") {
  // DC 100 -> shifted -924 = -57.75 steps of 16 -> -58 steps -> 96, i.e. flat 12.
  std::array<double, 64> c{};
  c[0] = 100.0;
  std::array<double, 64> out{};
  jpeg_block(c, jpeg_quant_steps(50), out);
  for (double p : out) CHECK(p == 12.0);
}

TEST_CASE("JPEG distortion does not grow with quality") {
  for (const char* name : testing::kImages) {
    CAPTURE(name);
    const Image img = load_pgm(testing::image_path(name));
    double previous = HUGE_VAL;
    for (int quality : {10, 30, 50, 70, 90, 100}) {
      CAPTURE(quality);
      const Image out = attack_jpeg(img, quality);
      double se = 0.0;
      for (std::size_t i = 0; i < img.pixels().size(); ++i) {
        const double d = static_cast<double>(out.pixels()[i]) - img.pixels()[i];
        se += d * d;
      }
      const double mse = se / static_cast<double>(img.pixels().size());
      CHECK(mse <= previous);
      previous = mse;
    }
  }
}

TEST_CASE("AWGN attack") {
  const Image img = testing::constant_image(64, 64, 128);
  const Image a = attack_awgn(img, 5.0, 3);
  CHECK(a == attack_awgn(img, 5.0, 3));
  CHECK_FALSE(a == attack_awgn(img, 5.0, 4));
  double sum = 0.0, sq = 0.0;
  for (auto p : a.pixels()) {
    sum += p - 128.0;
    sq += (p - 128.0) * (p - 128.0);
  }
  const double n = static_cast<double>(a.pixels().size());
  CHECK(std::abs(sum / n) < 0.3);
  // Rounding adds variance 1/12.
  CHECK(std::sqrt(sq / n) == doctest::Approx(std::sqrt(25.0 + 1.0 / 12)).epsilon(0.05));
  CHECK(attack_awgn(img, 0.0, 1) == img);
  CHECK_THROWS_AS(attack_awgn(img, -1.0, 1), Error);
}

TEST_CASE("AWGN block primitives share one noise stream") {
  Block px{};
  px.fill(100.25);
  Block noise, out;
  awgn_noise_block(5.0, 99, noise);
  awgn_block(px, 5.0, 99, out);
  for (int i = 0; i < 64; ++i) CHECK(out[i] == quantize_pixel(px[i] + noise[i]));
}

TEST_CASE("coefficient-domain AWGN is deterministic and has the right spread") {
  const BlockSpectrum spec = block_dct(testing::constant_image(64, 64, 100));
  const BlockSpectrum a = attack_awgn_coefficients(spec, 2.0, 8);
  const BlockSpectrum b = attack_awgn_coefficients(spec, 2.0, 8);
  double sq = 0.0;
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    for (int i = 1; i < 64; ++i) {
      REQUIRE(a.blocks[k][i] == b.blocks[k][i]);
      sq += a.blocks[k][i] * a.blocks[k][i];
    }
  CHECK(std::sqrt(sq / (a.blocks.size() * 63.0)) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("attack specs") {
  AttackSpec s;
  CHECK(s.label() == "none");
  s.kind = AttackKind::Jpeg;
  CHECK(s.label() == "jpeg(50)");
  s.kind = AttackKind::Awgn;
  CHECK(s.label() == "awgn(5)");
  s.kind = AttackKind::AwgnCoefficients;
  CHECK(s.label() == "awgn-coef(5)");
  CHECK(parse_attack_kind("jpeg") == AttackKind::Jpeg);
  CHECK_THROWS_AS(parse_attack_kind("blur"), Error);
  s.quality = 0;
  s.kind = AttackKind::Jpeg;
  CHECK_THROWS_AS(s.validate(), Error);
  const Image img = testing::random_image(16, 16, 2);
  CHECK(apply_attack(img, AttackSpec{}) == img);
}
