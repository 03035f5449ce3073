#include <cmath>
#include <numbers>

#include "dsmark/kernels.hpp"

namespace dsmark::kernels {

namespace {

struct DctMatrix {
  double c[64];
  DctMatrix() {
    for (int u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : 0.5;
      for (int x = 0; x < 8; ++x) {
        c[u * 8 + x] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctMatrix kDct;

constexpr std::size_t kLeaf = 32;

template <typename Term>
double pairwise(const Term& term, std::size_t lo, std::size_t n) {
  if (n <= kLeaf) {
    double acc = 0.0;
    for (std::size_t i = lo; i < lo + n; ++i) acc += term(i);
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise(term, lo, half) + pairwise(term, lo + half, n - half);
}

}  // namespace

const double* dct_matrix() { return kDct.c; }

namespace scalar {

void dct8x8(const double* in, double* out) {
  const double* c = kDct.c;
  double tmp[64];
  // tmp = C * in
  for (int u = 0; u < 8; ++u) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += c[u * 8 + k] * in[k * 8 + x];
      tmp[u * 8 + x] = acc;
    }
  }
  // out = tmp * C^T
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += tmp[u * 8 + k] * c[v * 8 + k];
      out[u * 8 + v] = acc;
    }
  }
}

void idct8x8(const double* in, double* out) {
  const double* c = kDct.c;
  double tmp[64];
  // tmp = C^T * in
  for (int y = 0; y < 8; ++y) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += c[k * 8 + y] * in[k * 8 + v];
      tmp[y * 8 + v] = acc;
    }
  }
  // out = tmp * C
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += tmp[y * 8 + k] * c[k * 8 + x];
      out[y * 8 + x] = acc;
    }
  }
}

double sum_products(const double* a, const double* b, std::size_t n) {
  return pairwise([&](std::size_t i) { return a[i] * b[i]; }, 0, n);
}

double sum_cauchy_terms(const double* s, const double* w, double gamma2, std::size_t n) {
  return pairwise([&](std::size_t i) { return s[i] * w[i] / (gamma2 + s[i] * s[i]); }, 0, n);
}

void add_scaled_product(const double* x, const double* m, const double* w, double scale,
                        double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + scale * m[i] * w[i];
}

}  // namespace scalar
}  // namespace dsmark::kernels
