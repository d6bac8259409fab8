#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace piperoute {

/// Seeded generator used by the instance generators.
///
/// The engine is std::mt19937_64 (output sequence fixed by the C++ standard).
/// Bounded draws use plain rejection sampling instead of
/// std::uniform_int_distribution, whose algorithm is implementation-defined:
/// draw r, reject while r < (2^64 - n) mod n, return r mod n.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Precondition: n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// One step of a partial Fisher-Yates shuffle: moves a uniformly chosen
  /// element of pool[taken..] to pool[taken].
  template <class T>
  void draw_into(std::vector<T>& pool, std::size_t taken) {
    const auto pick = taken + static_cast<std::size_t>(below(pool.size() - taken));
    std::swap(pool[taken], pool[pick]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace piperoute
