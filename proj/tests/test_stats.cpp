#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dsmark/error.hpp"
#include "dsmark/stats.hpp"
#include "support.hpp"

using namespace dsmark;

namespace {
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
}  // namespace

TEST_CASE("Q function against quadrature and tabulated points") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  CHECK(q_function(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(q_function(-1.0) == doctest::Approx(1.0 - q_function(1.0)));
  for (double x : {0.3, 1.0, 2.5, 4.0}) {
    const double tail = testing::simpson(normal_pdf, x, x + 14.0);
    CHECK(q_function(x) == doctest::Approx(tail).epsilon(1e-9));
  }
  CHECK(q_function(10.0) == doctest::Approx(7.61985302416047e-24).epsilon(1e-9));
}

TEST_CASE("Q inverse round trip") {
  for (double p : {1e-15, 1e-9, 1e-5, 1e-3, 0.005, 0.05, 0.3, 0.5, 0.7, 0.95, 0.999, 1 - 1e-9}) {
    CAPTURE(p);
    CHECK(q_function(q_inverse(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(q_inverse(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q_inverse(0.005) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK_THROWS_AS(q_inverse(0.0), Error);
  CHECK_THROWS_AS(q_inverse(1.0), Error);
}

TEST_CASE("GGD moment ratio closed forms and monotonicity") {
  CHECK(ggd_abs_moment_ratio(2.0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
  CHECK(ggd_abs_moment_ratio(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  double prev = 0.0;
  for (double c = 0.1; c <= 5.0; c += 0.05) {
    const double r = ggd_abs_moment_ratio(c);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("GGD constants and density") {
  const GgdParams g = GgdParams::from_shape(2.0, 3.0);
  CHECK(g.A == doctest::Approx(1.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi))));
  CHECK(g.beta == doctest::Approx(1.0 / (3.0 * std::sqrt(2.0))));
  for (double c : {0.5, 0.7, 1.0, 2.0, 3.5}) {
    CAPTURE(c);
    const GgdParams p = GgdParams::from_shape(c, 2.0);
    const double L = c < 0.6 ? 600.0 : 200.0;
    const auto f = [&](double x) { return ggd_pdf(p, x); };
    const auto f2 = [&](double x) { return x * x * ggd_pdf(p, x); };
    const double mass = 2.0 * testing::simpson(f, 0.0, L, 400000);
    const double var = 2.0 * testing::simpson(f2, 0.0, L, 400000);
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-4));
    CHECK(var == doctest::Approx(4.0).epsilon(2e-4));
  }
  CHECK_THROWS_AS(GgdParams::from_shape(0.0, 1.0), Error);
}

TEST_CASE("fit_ggd recovers the shape of synthetic samples") {
  for (double c : {0.5, 0.7, 1.0, 2.0, 3.0}) {
    CAPTURE(c);
    const auto x = testing::sample_ggd(c, 10.0, 100000, 17);
    const GgdParams g = fit_ggd(x);
    CHECK(std::abs(g.c - c) < 0.1);
    CHECK(g.sigma_x == doctest::Approx(10.0).epsilon(0.05));
  }
}

TEST_CASE("fit_ggd is scale invariant in c and equivariant in sigma") {
  auto x = testing::sample_ggd(0.8, 1.0, 5000, 3);
  const GgdParams a = fit_ggd(x);
  for (double& v : x) v *= 7.0;
  const GgdParams b = fit_ggd(x);
  CHECK(b.c == doctest::Approx(a.c).epsilon(1e-6));
  CHECK(b.sigma_x == doctest::Approx(7.0 * a.sigma_x));
}

TEST_CASE("fit_ggd rejects degenerate input") {
  CHECK_THROWS_AS(fit_ggd(std::vector<double>(50, 1.0)), Error);
  CHECK_THROWS_AS(fit_ggd(std::vector<double>(500, 4.0)), Error);
}

TEST_CASE("fit_cauchy recovers the scale") {
  for (double gamma : {0.01, 1.0, 6.7, 250.0}) {
    CAPTURE(gamma);
    const auto x = testing::sample_cauchy(gamma, 100000, 23);
    CHECK(fit_cauchy(x).gamma == doctest::Approx(gamma).epsilon(0.02));
  }
}

TEST_CASE("fit_cauchy solves the likelihood equation") {
  const auto x = testing::sample_cauchy(3.0, 2000, 8);
  const double g = fit_cauchy(x).gamma;
  double s = 0.0;
  for (double v : x) s += g * g / (g * g + v * v);
  CHECK(s == doctest::Approx(x.size() / 2.0).epsilon(1e-10));
}

TEST_CASE("fit_cauchy rejects degenerate input") {
  CHECK_THROWS_AS(fit_cauchy(std::vector<double>(10, 1.0)), Error);
  CHECK_THROWS_AS(fit_cauchy(std::vector<double>(200, 0.0)), Error);
  std::vector<double> half(200, 0.0);
  for (std::size_t i = 0; i < 100; ++i) half[i] = 1.0 + static_cast<double>(i);
  CHECK_THROWS_AS(fit_cauchy(half), Error);
}

TEST_CASE("cauchy_pdf") {
  const CauchyParams p{2.0, 0.0};
  CHECK(cauchy_pdf(p, 0.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  const double mass = testing::simpson([&](double x) { return cauchy_pdf(p, x); }, -1000.0, 1000.0, 200000);
  CHECK(mass == doctest::Approx(1.0 - 2.0 * std::atan(1.0 / 500.0) / std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("DS-ASS miss probability") {
  const int n = 2000;
  const double sigma = 20.0;
  const double unit = sigma / std::sqrt(static_cast<double>(n));
  // k = 0 cannot beat chance.
  CHECK(dsass_miss_probability(0.01, 0.0, n, sigma) == doctest::Approx(0.99));
  // k sqrt(N)/sigma = 1, p_fa = 0.01: 1 - 2 Q(2.5758 - 1).
  CHECK(dsass_miss_probability(0.01, unit, n, sigma) ==
        doctest::Approx(1.0 - 2.0 * q_function(2.5758293035489004 - 1.0)).epsilon(1e-10));
  // psi <= k: every watermarked statistic clears the threshold.
  CHECK(dsass_miss_probability(0.01, 3.0 * unit, n, sigma) == 0.0);
  // Continuous at psi = k.
  CHECK(dsass_miss_probability(0.01, 2.5758293035489004 * unit, n, sigma) < 1e-12);
  double prev = 1.0;
  for (double r = 0.0; r < 2.5; r += 0.1) {
    const double pm = dsass_miss_probability(0.01, r * unit, n, sigma);
    CHECK(pm <= prev);
    prev = pm;
  }
  CHECK_THROWS_AS(dsass_miss_probability(0.0, 1.0, n, sigma), Error);
  CHECK_THROWS_AS(dsass_miss_probability(0.01, -1.0, n, sigma), Error);
  CHECK_THROWS_AS(dsass_miss_probability(0.01, 1.0, 1, sigma), Error);
  CHECK_THROWS_AS(dsass_miss_probability(0.01, 1.0, n, 0.0), Error);
}

TEST_CASE("distortion summary") {
  const DistortionSummary u = distortion_summary(std::vector<double>(10, 2.0), 0.5);
  CHECK(u.k == doctest::Approx(1.0));
  CHECK(u.d_w == doctest::Approx(1.0));
  const DistortionSummary v = distortion_summary(std::vector<double>{1.0, 3.0}, 1.0);
  CHECK(v.k == doctest::Approx(2.0));
  CHECK(v.d_w == doctest::Approx(5.0));
  CHECK(v.k * v.k <= v.d_w);
  CHECK_THROWS_AS(distortion_summary(std::vector<double>{}, 1.0), Error);
  CHECK_THROWS_AS(distortion_summary(std::vector<double>{1.0}, 0.0), Error);
  CHECK_THROWS_AS(distortion_summary(std::vector<double>{1.0, -1.0}, 1.0), Error);
}
