#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dsmark/image.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(DSMARK_DATA_DIR) / rel; }
inline std::filesystem::path image_path(const std::string& name) { return data_path("images/" + name + ".pgm"); }

inline const char* const kImages[] = {"lena", "baboon", "barbara", "cameraman"};

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("dsmark_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Reference samplers built on the standard library distributions, kept
// separate from the library's own generator.

/// Zero-mean generalized Gaussian with shape c and standard deviation sigma:
/// |X| = s * G^(1/c), G ~ Gamma(1/c, 1), random sign.
inline std::vector<double> sample_ggd(double c, double sigma, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::gamma_distribution<double> gamma(1.0 / c, 1.0);
  std::bernoulli_distribution sign(0.5);
  const double s = sigma * std::sqrt(std::tgamma(1.0 / c) / std::tgamma(3.0 / c));
  std::vector<double> out(n);
  for (double& v : out) v = (sign(eng) ? 1.0 : -1.0) * s * std::pow(gamma(eng), 1.0 / c);
  return out;
}

inline std::vector<double> sample_cauchy(double gamma, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::cauchy_distribution<double> d(0.0, gamma);
  std::vector<double> out(n);
  for (double& v : out) v = d(eng);
  return out;
}

inline std::vector<double> sample_normal(double sigma, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> out(n);
  for (double& v : out) v = d(eng);
  return out;
}

inline std::vector<double> sample_uniform(double lo, double hi, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = d(eng);
  return out;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Direct O(n^4) orthonormal 2-D DCT-II of one 8x8 block, row-major.
inline std::vector<double> brute_force_dct(const std::vector<double>& px) {
  std::vector<double> out(64, 0.0);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      const double au = u == 0 ? std::sqrt(0.125) : 0.5;
      const double av = v == 0 ? std::sqrt(0.125) : 0.5;
      double s = 0.0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          s += px[y * 8 + x] * std::cos((2 * y + 1) * u * std::numbers::pi / 16) *
               std::cos((2 * x + 1) * v * std::numbers::pi / 16);
        }
      out[u * 8 + v] = au * av * s;
    }
  return out;
}

inline dsmark::Image constant_image(int w, int h, std::uint8_t value) {
  return dsmark::Image(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, value));
}

inline dsmark::Image random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (auto& p : px) p = static_cast<std::uint8_t>(d(eng));
  return dsmark::Image(w, h, std::move(px));
}

}  // namespace testing
