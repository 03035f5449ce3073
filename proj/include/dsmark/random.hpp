#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace dsmark {

/// One step of the splitmix64 generator; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based child seed. Children of the same master are independent
/// of the order in which they are requested, so trials can run in any order
/// or on any thread.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

/// splitmix64 as a UniformRandomBitGenerator. Seeding is free, which suits
/// streams that are re-created per 8x8 block.
struct SplitMix64Engine {
  using result_type = std::uint64_t;
  explicit SplitMix64Engine(std::uint64_t seed) : state(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return splitmix64(state); }
  std::uint64_t state;
};

/// Seeded generator with platform-independent derived distributions.
///
/// Engine output is fixed by the standard, but the std::*_distribution
/// adaptors are implementation-defined, so bounded integers and normals are
/// derived here to keep sequences identical across toolchains.
template <typename Engine>
class BasicRng {
 public:
  explicit BasicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with
  /// rejection of the biased low region.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal variate. Box-Muller pairs: the sine branch is returned
  /// on the following call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Fisher-Yates. Only the first `count` slots are finalized; they form a
  /// uniformly random ordered selection from the whole range.
  template <typename T>
  void partial_shuffle(std::span<T> values, std::size_t count) {
    const std::size_t n = values.size();
    if (count > n) count = n;
    for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(values[i], values[j]);
    }
  }

  template <typename T>
  void shuffle(std::span<T> values) {
    partial_shuffle(values, values.size());
  }

 private:
  Engine engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// General-purpose generator: permutations, keys, host samples.
using Rng = BasicRng<std::mt19937_64>;
/// Per-block attack noise.
using BlockRng = BasicRng<SplitMix64Engine>;

}  // namespace dsmark
