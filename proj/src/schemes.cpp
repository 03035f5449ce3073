#include "dsmark/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "dsmark/error.hpp"
#include "dsmark/kernels.hpp"
#include "dsmark/random.hpp"

namespace dsmark {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* op) {
  if (a != b) throw Error(std::string(op) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

void check_masks(std::span<const double> m) {
  for (double v : m) {
    if (!(v > 0.0)) throw Error("mask thresholds must be positive");
  }
}

HostVector embed_signed(std::span<const double> x, const Watermark& w, double scale, std::span<const double> m) {
  HostVector s(x.size());
  kernels::active().add_scaled_product(x.data(), m.data(), w.values().data(), scale, s.data(), x.size());
  return s;
}

void check_embed(std::span<const double> x, const Watermark& w, std::span<const double> m, const char* op) {
  check_lengths(x.size(), w.size(), op);
  check_lengths(m.size(), w.size(), op);
  check_masks(m);
}

}  // namespace

Watermark Watermark::from_values(std::vector<double> values) {
  if (values.size() < 2 || values.size() % 2 != 0) throw Error("watermark length must be even and at least 2");
  long balance = 0;
  for (double v : values) {
    if (v == 1.0) {
      ++balance;
    } else if (v == -1.0) {
      --balance;
    } else {
      throw Error("watermark entries must be +1 or -1");
    }
  }
  if (balance != 0) throw Error("watermark entries must sum to zero");
  return Watermark(std::move(values));
}

Watermark generate_watermark(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw Error("watermark length must be even and at least 2, got " + std::to_string(n));
  std::vector<double> v(static_cast<std::size_t>(n));
  std::fill(v.begin(), v.begin() + n / 2, 1.0);
  std::fill(v.begin() + n / 2, v.end(), -1.0);
  Rng rng(seed);
  rng.shuffle(std::span<double>(v));
  return Watermark(std::move(v));
}

double projection(std::span<const double> x, const Watermark& w) {
  check_lengths(x.size(), w.size(), "projection");
  return kernels::active().sum_products(x.data(), w.values().data(), x.size()) / static_cast<double>(x.size());
}

double cauchy_projection(std::span<const double> x, const Watermark& w, double gamma) {
  check_lengths(x.size(), w.size(), "cauchy_projection");
  if (!(gamma > 0.0)) throw Error("cauchy scale must be positive");
  return kernels::active().sum_cauchy_terms(x.data(), w.values().data(), gamma * gamma, x.size()) /
         static_cast<double>(x.size());
}

HostVector embed_ass(std::span<const double> x, const Watermark& w, double a, std::span<const double> m) {
  check_embed(x, w, m, "embed_ass");
  return embed_signed(x, w, a, m);
}

HostVector embed_dsass(std::span<const double> x, const Watermark& w, double a, std::span<const double> m) {
  check_embed(x, w, m, "embed_dsass");
  return embed_signed(x, w, projection(x, w) > 0.0 ? a : -a, m);
}

HostVector embed_dscauchy(std::span<const double> x, const Watermark& w, double a, std::span<const double> m,
                          double gamma) {
  check_embed(x, w, m, "embed_dscauchy");
  return embed_signed(x, w, cauchy_projection(x, w, gamma) > 0.0 ? a : -a, m);
}

double detect_correlator(std::span<const double> s, const Watermark& w) { return projection(s, w); }

double detect_ggd(std::span<const double> s, const Watermark& w, double a, std::span<const double> m, double c) {
  check_lengths(s.size(), w.size(), "detect_ggd");
  check_lengths(m.size(), w.size(), "detect_ggd");
  if (!(c > 0.0)) throw Error("GGD shape must be positive");
  // pow has no vector intrinsic; this loop stays scalar.
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += std::pow(std::abs(s[i]), c) - std::pow(std::abs(s[i] - a * m[i] * w[i]), c);
  }
  return acc / static_cast<double>(s.size());
}

double detect_cauchy(std::span<const double> s, const Watermark& w, double gamma) {
  return cauchy_projection(s, w, gamma);
}

DetectionResult decide(double statistic, double psi, Rule rule) {
  DetectionResult r{statistic, psi, Hypothesis::H0, rule};
  if (rule == Rule::DoubleSided) {
    if (psi < 0.0) throw Error("double-sided threshold must be non-negative");
    r.decision = std::abs(statistic) > psi ? Hypothesis::H1 : Hypothesis::H0;
  } else {
    r.decision = statistic > psi ? Hypothesis::H1 : Hypothesis::H0;
  }
  return r;
}

double stdm_quantize(double v, double delta) {
  if (!(delta > 0.0)) throw Error("quantizer step must be positive");
  return delta * (std::floor(v / delta) + 0.5);
}

StdmResult embed_stdm_perceptual(std::span<const double> x, const Watermark& w, std::span<const double> m,
                                 double delta, double max_strength) {
  check_lengths(x.size(), w.size(), "embed_stdm_perceptual");
  check_lengths(m.size(), w.size(), "embed_stdm_perceptual");
  double mask_sum = 0.0;
  for (double v : m) mask_sum += v;
  if (!(mask_sum > 0.0)) throw Error("embed_stdm_perceptual: mask sum must be positive");
  const double xbar = projection(x, w);
  const double target = stdm_quantize(xbar, delta);
  StdmResult out;
  out.strength = (target - xbar) / (mask_sum / static_cast<double>(x.size()));
  out.within_cap = std::abs(out.strength) <= max_strength;
  out.s = embed_signed(x, w, out.strength, m);
  return out;
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::AssCor:
      return "ASS-COR";
    case Scheme::Hernandez:
      return "Hernandez";
    case Scheme::Briassouli:
      return "Briassouli";
    case Scheme::DsAss:
      return "DS-ASS";
    case Scheme::DsCauchy:
      return "DS-Cauchy";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (Scheme s : kAllSchemes) {
    std::string name(to_string(s));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (name == lower) return s;
  }
  if (lower == "ass") return Scheme::AssCor;
  throw Error("unknown scheme '" + std::string(text) + "'");
}

Rule rule_for(Scheme s) {
  return s == Scheme::DsAss || s == Scheme::DsCauchy ? Rule::DoubleSided : Rule::SingleSided;
}

}  // namespace dsmark
