#include <atomic>
#include <cstdlib>
#include <string>

#include "dsmark/error.hpp"
#include "dsmark/kernels.hpp"

namespace dsmark::kernels {

namespace {

constexpr KernelTable kScalar{SimdLevel::Scalar, scalar::dct8x8, scalar::idct8x8, scalar::sum_products,
                              scalar::sum_cauchy_terms, scalar::add_scaled_product};

#if defined(DSMARK_HAVE_AVX2)
constexpr KernelTable kAvx2{SimdLevel::Avx2, avx2::dct8x8, avx2::idct8x8, avx2::sum_products,
                            avx2::sum_cauchy_terms, avx2::add_scaled_product};
#endif

const KernelTable* resolve() {
  if (const char* env = std::getenv("DSMARK_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return &kScalar;
  }
  if (supported(SimdLevel::Avx2)) return &table_for(SimdLevel::Avx2);
  return &kScalar;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

bool supported(SimdLevel level) {
  switch (level) {
    case SimdLevel::Scalar:
      return true;
    case SimdLevel::Avx2:
#if defined(DSMARK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(SimdLevel level) {
  if (!supported(level)) throw Error("SIMD level not supported on this CPU: " + std::string(to_string(level)));
#if defined(DSMARK_HAVE_AVX2)
  if (level == SimdLevel::Avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void force_level(SimdLevel level) { g_active.store(&table_for(level), std::memory_order_release); }

std::string_view to_string(SimdLevel level) {
  switch (level) {
    case SimdLevel::Scalar:
      return "scalar";
    case SimdLevel::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace dsmark::kernels
