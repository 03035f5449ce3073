#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dsmark/blockdct.hpp"

namespace dsmark {

/// Bipolar, zero-sum watermark of even length. Values are stored as doubles
/// (+1.0 / -1.0) so they feed the SIMD kernels directly.
class Watermark {
 public:
  /// Throws dsmark::Error unless every entry is +-1, the length is even and
  /// at least 2, and the entries sum to zero.
  static Watermark from_values(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  friend Watermark generate_watermark(int n, std::uint64_t seed);
  explicit Watermark(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// N/2 ones and N/2 minus ones in a seeded uniformly random order.
Watermark generate_watermark(int n, std::uint64_t seed);

enum class Rule { SingleSided, DoubleSided };
enum class Hypothesis { H0, H1 };

struct DetectionResult {
  double statistic = 0.0;
  double threshold = 0.0;
  Hypothesis decision = Hypothesis::H0;
  Rule rule = Rule::SingleSided;
};

/// (1/N) sum x_i w_i.
double projection(std::span<const double> x, const Watermark& w);
/// (1/N) sum x_i w_i / (gamma^2 + x_i^2).
double cauchy_projection(std::span<const double> x, const Watermark& w, double gamma);

/// s = x + a m w.
HostVector embed_ass(std::span<const double> x, const Watermark& w, double a, std::span<const double> m);
/// s = x + a m w if projection(x, w) > 0, otherwise x - a m w.
HostVector embed_dsass(std::span<const double> x, const Watermark& w, double a, std::span<const double> m);
/// Like embed_dsass with the sign taken from cauchy_projection.
HostVector embed_dscauchy(std::span<const double> x, const Watermark& w, double a, std::span<const double> m,
                          double gamma);

/// Linear correlator, (1/N) sum s_i w_i.
double detect_correlator(std::span<const double> s, const Watermark& w);
/// GGD likelihood-ratio statistic (1/N) sum |s_i|^c - |s_i - a m_i w_i|^c.
/// Needs the nominal strength a and the masks as side information.
double detect_ggd(std::span<const double> s, const Watermark& w, double a, std::span<const double> m, double c);
/// Cauchy LMP statistic (1/N) sum s_i w_i / (gamma^2 + s_i^2).
double detect_cauchy(std::span<const double> s, const Watermark& w, double gamma);

/// Double-sided: H1 iff |L| > psi. Single-sided: H1 iff L > psi.
DetectionResult decide(double statistic, double psi, Rule rule);

/// Nearest point of the shifted lattice delta*Z + delta/2. Points exactly
/// between two centroids go to the upper one.
double stdm_quantize(double v, double delta);

struct StdmResult {
  HostVector s;
  double strength = 0.0;  ///< effective a, may be negative
  bool within_cap = true;  ///< |strength| <= strength cap
};

/// Spread-transform quantization with perceptual shaping: picks a so that
/// the projection of s on w lands on the lattice point nearest to that of x.
/// The strength is dictated by the host projection, not by `max_strength`;
/// the cap is only reported back.
StdmResult embed_stdm_perceptual(std::span<const double> x, const Watermark& w, std::span<const double> m,
                                 double delta, double max_strength);

/// Benchmark scheme families (embedder + detector + decision rule).
enum class Scheme { AssCor, Hernandez, Briassouli, DsAss, DsCauchy };

std::string_view to_string(Scheme s);
/// Accepts the legend names ("ASS-COR", "DS-ASS", ...) case-insensitively.
Scheme parse_scheme(std::string_view text);
Rule rule_for(Scheme s);
inline constexpr Scheme kAllSchemes[] = {Scheme::AssCor, Scheme::Hernandez, Scheme::Briassouli, Scheme::DsAss,
                                         Scheme::DsCauchy};

}  // namespace dsmark
