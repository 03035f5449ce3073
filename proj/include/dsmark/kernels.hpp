#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2+FMA variant in kernels::avx2.
// Callers go through active(), which picks the widest variant the CPU
// supports. Set DSMARK_SIMD=scalar in the environment to pin the reference.

#include <cstddef>
#include <string_view>

namespace dsmark::kernels {

enum class SimdLevel { Scalar, Avx2 };

struct KernelTable {
  SimdLevel level;
  /// out = C * in * C^T for the orthonormal 8x8 DCT matrix C.
  void (*dct8x8)(const double* in, double* out);
  /// out = C^T * in * C.
  void (*idct8x8)(const double* in, double* out);
  /// Pairwise sum of a[i] * b[i].
  double (*sum_products)(const double* a, const double* b, std::size_t n);
  /// Pairwise sum of s[i] * w[i] / (gamma2 + s[i]^2).
  double (*sum_cauchy_terms)(const double* s, const double* w, double gamma2, std::size_t n);
  /// out[i] = x[i] + scale * m[i] * w[i].
  void (*add_scaled_product)(const double* x, const double* m, const double* w, double scale,
                             double* out, std::size_t n);
};

namespace scalar {
void dct8x8(const double* in, double* out);
void idct8x8(const double* in, double* out);
double sum_products(const double* a, const double* b, std::size_t n);
double sum_cauchy_terms(const double* s, const double* w, double gamma2, std::size_t n);
void add_scaled_product(const double* x, const double* m, const double* w, double scale,
                        double* out, std::size_t n);
}  // namespace scalar

#if defined(DSMARK_HAVE_AVX2)
namespace avx2 {
void dct8x8(const double* in, double* out);
void idct8x8(const double* in, double* out);
double sum_products(const double* a, const double* b, std::size_t n);
double sum_cauchy_terms(const double* s, const double* w, double gamma2, std::size_t n);
void add_scaled_product(const double* x, const double* m, const double* w, double scale,
                        double* out, std::size_t n);
}  // namespace avx2
#endif

/// Orthonormal DCT matrix, C[u][x] = alpha(u) cos((2x+1) u pi / 16).
const double* dct_matrix();

bool supported(SimdLevel level);
/// Table for a specific level; throws dsmark::Error if unsupported.
const KernelTable& table_for(SimdLevel level);
/// Dispatched table (resolved once, then fixed unless force_level is called).
const KernelTable& active();
/// Overrides dispatch for the rest of the process (tests, benchmarks).
void force_level(SimdLevel level);

std::string_view to_string(SimdLevel level);

}  // namespace dsmark::kernels
