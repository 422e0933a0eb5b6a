#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace glance {

/// Seeded std::mt19937_64 with hand-rolled conversions. The engine's output
/// sequence is fixed by the standard, but the std distributions are not, so
/// uniform reals, bounded integers and shuffles are derived here to keep
/// generated data identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  auto next_u64() -> std::uint64_t { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  auto uniform() -> double { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  auto uniform(double lo, double hi) -> double { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); bound must be positive. Rejection
  /// sampling removes modulo bias.
  auto below(std::uint64_t bound) -> std::uint64_t
  {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) {
      x = engine_();
    }
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  auto between(int lo, int hi) -> int
  {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T> void shuffle(std::vector<T> &items)
  {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

} // namespace glance
