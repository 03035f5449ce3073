#pragma once

#include <span>

namespace dsmark {

/// Gaussian upper tail Q(x) = P(Z > x).
double q_function(double x);
/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/// Generalized Gaussian f(x) = A exp(-|beta x|^c).
struct GgdParams {
  double c = 2.0;
  double sigma_x = 1.0;
  double beta = 0.0;
  double A = 0.0;

  /// Fills beta and A from the shape and standard deviation.
  static GgdParams from_shape(double c, double sigma_x);
};

/// E|X| / sqrt(E X^2) for a zero-mean GGD with shape c.
double ggd_abs_moment_ratio(double c);

/// Moment-matching fit: solves ggd_abs_moment_ratio(c) = mean|x| / rms(x)
/// by bisection on [0.1, 5]; sigma_x is the sample standard deviation.
GgdParams fit_ggd(std::span<const double> data);
double ggd_pdf(const GgdParams& p, double x);

struct CauchyParams {
  double gamma = 1.0;
  double delta = 0.0;
};

/// Maximum-likelihood scale of the centred Cauchy law.
CauchyParams fit_cauchy(std::span<const double> data);
double cauchy_pdf(const CauchyParams& p, double x);

/// Miss probability of the double-sided additive scheme for fixed masks
/// and a Gaussian projected host, at false-alarm rate p_fa.
double dsass_miss_probability(double p_fa, double k, int n, double sigma_x);

struct DistortionSummary {
  double k = 0.0;    ///< mean embedding displacement (a/N) sum m_i
  double d_w = 0.0;  ///< mean squared distortion (a^2/N) sum m_i^2
};

DistortionSummary distortion_summary(std::span<const double> masks, double a);

}  // namespace dsmark
