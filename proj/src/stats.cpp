#include "dsmark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dsmark/error.hpp"

namespace dsmark {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

// Acklam's rational approximation to the standard normal quantile
// (relative error ~1e-9 before refinement).
double normal_quantile_seed(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double sum_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("q_inverse: probability must lie in (0, 1)");
  // Q^{-1}(p) = Phi^{-1}(1 - p) = -Phi^{-1}(p).
  double x = -normal_quantile_seed(p);
  // Halley polish on Q(x) - p; two steps take the seed to machine precision.
  for (int it = 0; it < 2; ++it) {
    const double err = q_function(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf == 0.0) break;
    const double u = err / pdf;  // Newton step is x += u since Q' = -pdf
    x += u / (1.0 - 0.5 * x * u);
  }
  return x;
}

double ggd_abs_moment_ratio(double c) {
  return std::exp(std::lgamma(2.0 / c) - 0.5 * (std::lgamma(1.0 / c) + std::lgamma(3.0 / c)));
}

GgdParams GgdParams::from_shape(double c, double sigma_x) {
  if (!(c > 0.0) || !(sigma_x > 0.0)) throw Error("GGD shape and deviation must be positive");
  GgdParams p;
  p.c = c;
  p.sigma_x = sigma_x;
  p.beta = std::sqrt(std::tgamma(3.0 / c) / std::tgamma(1.0 / c)) / sigma_x;
  p.A = p.beta * c / (2.0 * std::tgamma(1.0 / c));
  return p;
}

GgdParams fit_ggd(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 100) throw Error("fit_ggd needs at least 100 samples, got " + std::to_string(n));
  double mean = 0.0;
  double sq = 0.0;
  for (double x : data) {
    mean += x;
    sq += x * x;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : data) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) throw Error("fit_ggd: data has zero variance");

  const double ratio = (sum_abs(data) / static_cast<double>(n)) / std::sqrt(sq / static_cast<double>(n));
  double lo = 0.1;
  double hi = 5.0;
  if (ratio < ggd_abs_moment_ratio(lo) || ratio > ggd_abs_moment_ratio(hi)) {
    throw Error("fit_ggd: moment ratio " + std::to_string(ratio) + " outside the range reachable for c in [0.1, 5]");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (ggd_abs_moment_ratio(mid) < ratio) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return GgdParams::from_shape(0.5 * (lo + hi), std::sqrt(var));
}

double ggd_pdf(const GgdParams& p, double x) { return p.A * std::exp(-std::pow(std::abs(p.beta * x), p.c)); }

CauchyParams fit_cauchy(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 100) throw Error("fit_cauchy needs at least 100 samples, got " + std::to_string(n));
  std::vector<double> a(n);
  std::transform(data.begin(), data.end(), a.begin(), [](double x) { return std::abs(x); });
  const auto zeros = static_cast<std::size_t>(std::count(a.begin(), a.end(), 0.0));
  if (zeros == n) throw Error("fit_cauchy: all samples are zero");
  if (2 * zeros >= n) throw Error("fit_cauchy: at least half of the samples are zero; the ML scale degenerates to 0");

  // Score equation for the centred law: g(gamma) = sum gamma^2/(gamma^2+x^2) - n/2,
  // strictly increasing in gamma, so a bracketed Newton iteration is safe.
  const auto score = [&](double g) {
    double s = 0.0;
    double ds = 0.0;
    const double g2 = g * g;
    for (double x : a) {
      const double den = g2 + x * x;
      s += g2 / den;
      ds += 2.0 * g * x * x / (den * den);
    }
    return std::pair{s - 0.5 * static_cast<double>(n), ds};
  };

  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[n / 4];
  const double q3 = sorted[(3 * n) / 4];
  double g = 0.5 * (q3 - q1);
  if (!(g > 0.0)) g = *std::max_element(a.begin(), a.end());

  double lo = g;
  double hi = g;
  while (score(lo).first > 0.0) lo *= 0.5;
  while (score(hi).first < 0.0) hi *= 2.0;
  g = std::clamp(g, lo, hi);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const auto [s, ds] = score(g);
    if (s == 0.0) return CauchyParams{g, 0.0};
    if (s < 0.0) {
      lo = g;
    } else {
      hi = g;
    }
    double next = ds > 0.0 ? g - s / ds : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    g = next;
  }
  return CauchyParams{g, 0.0};
}

double cauchy_pdf(const CauchyParams& p, double x) {
  const double d = x - p.delta;
  return p.gamma / (std::numbers::pi * (p.gamma * p.gamma + d * d));
}

double dsass_miss_probability(double p_fa, double k, int n, double sigma_x) {
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw Error("dsass_miss_probability: p_fa must lie in (0, 1)");
  if (!(k >= 0.0)) throw Error("dsass_miss_probability: k must be non-negative");
  if (n < 2) throw Error("dsass_miss_probability: N must be at least 2");
  if (!(sigma_x > 0.0)) throw Error("dsass_miss_probability: sigma must be positive");
  const double z = q_inverse(p_fa / 2.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double psi = sigma_x / root_n * z;
  if (psi <= k) return 0.0;
  return std::clamp(1.0 - 2.0 * q_function(z - k * root_n / sigma_x), 0.0, 1.0);
}

DistortionSummary distortion_summary(std::span<const double> masks, double a) {
  if (masks.empty()) throw Error("distortion_summary: empty mask vector");
  if (!(a > 0.0)) throw Error("distortion_summary: strength must be positive");
  double s1 = 0.0;
  double s2 = 0.0;
  for (double m : masks) {
    if (!(m > 0.0)) throw Error("distortion_summary: masks must be positive");
    s1 += m;
    s2 += m * m;
  }
  const double n = static_cast<double>(masks.size());
  DistortionSummary out{a * s1 / n, a * a * s2 / n};
  // Cauchy-Schwarz: k^2 <= D_w up to rounding.
  if (out.k * out.k > out.d_w * (1.0 + 1e-12)) throw Error("distortion_summary: k^2 exceeds D_w");
  return out;
}

}  // namespace dsmark
