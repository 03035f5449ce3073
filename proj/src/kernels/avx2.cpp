// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.
#include <immintrin.h>

#include "dsmark/kernels.hpp"

namespace dsmark::kernels::avx2 {

namespace {

constexpr std::size_t kLeaf = 64;

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// rows_out[r] = sum_k coeff[r][k] * rows_in[k] over 8x8 row-major matrices,
// where coeff(r, k) = m[r * rs + k * ks]. Each row is two 4-lane registers.
inline void broadcast_mul(const double* m, int rs, int ks, const double* rows_in, double* rows_out) {
  __m256d in_lo[8];
  __m256d in_hi[8];
  for (int k = 0; k < 8; ++k) {
    in_lo[k] = _mm256_loadu_pd(rows_in + k * 8);
    in_hi[k] = _mm256_loadu_pd(rows_in + k * 8 + 4);
  }
  for (int r = 0; r < 8; ++r) {
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    for (int k = 0; k < 8; ++k) {
      const __m256d c = _mm256_set1_pd(m[r * rs + k * ks]);
      acc_lo = _mm256_fmadd_pd(c, in_lo[k], acc_lo);
      acc_hi = _mm256_fmadd_pd(c, in_hi[k], acc_hi);
    }
    _mm256_storeu_pd(rows_out + r * 8, acc_lo);
    _mm256_storeu_pd(rows_out + r * 8 + 4, acc_hi);
  }
}

inline void transpose8x8(const double* in, double* out) {
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) out[c * 8 + r] = in[r * 8 + c];
}

template <typename VecTerm, typename ScalarTerm>
double pairwise(const VecTerm& vterm, const ScalarTerm& sterm, std::size_t lo, std::size_t n) {
  if (n <= kLeaf) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = lo;
    for (; i + 4 <= lo + n; i += 4) acc = _mm256_add_pd(acc, vterm(i));
    double tail = 0.0;
    for (; i < lo + n; ++i) tail += sterm(i);
    return hsum(acc) + tail;
  }
  const std::size_t half = (n / 2) & ~std::size_t{3};
  return pairwise(vterm, sterm, lo, half) + pairwise(vterm, sterm, lo + half, n - half);
}

}  // namespace

void dct8x8(const double* in, double* out) {
  const double* c = dct_matrix();
  double tmp[64];
  double tmp_t[64];
  double out_t[64];
  // tmp = C * in; out^T = C * tmp^T.
  broadcast_mul(c, 8, 1, in, tmp);
  transpose8x8(tmp, tmp_t);
  broadcast_mul(c, 8, 1, tmp_t, out_t);
  transpose8x8(out_t, out);
}

void idct8x8(const double* in, double* out) {
  const double* c = dct_matrix();
  double tmp[64];
  double tmp_t[64];
  double out_t[64];
  // tmp = C^T * in; out^T = C^T * tmp^T.
  broadcast_mul(c, 1, 8, in, tmp);
  transpose8x8(tmp, tmp_t);
  broadcast_mul(c, 1, 8, tmp_t, out_t);
  transpose8x8(out_t, out);
}

double sum_products(const double* a, const double* b, std::size_t n) {
  return pairwise([&](std::size_t i) { return _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)); },
                  [&](std::size_t i) { return a[i] * b[i]; }, 0, n);
}

double sum_cauchy_terms(const double* s, const double* w, double gamma2, std::size_t n) {
  const __m256d g2 = _mm256_set1_pd(gamma2);
  return pairwise(
      [&](std::size_t i) {
        const __m256d sv = _mm256_loadu_pd(s + i);
        const __m256d num = _mm256_mul_pd(sv, _mm256_loadu_pd(w + i));
        return _mm256_div_pd(num, _mm256_fmadd_pd(sv, sv, g2));
      },
      [&](std::size_t i) { return s[i] * w[i] / (gamma2 + s[i] * s[i]); }, 0, n);
}

void add_scaled_product(const double* x, const double* m, const double* w, double scale,
                        double* out, std::size_t n) {
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mw = _mm256_mul_pd(_mm256_loadu_pd(m + i), _mm256_loadu_pd(w + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(sc, mw, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + scale * m[i] * w[i];
}

}  // namespace dsmark::kernels::avx2
