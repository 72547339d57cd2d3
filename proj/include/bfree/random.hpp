#ifndef BFREE_RANDOM_HPP
#define BFREE_RANDOM_HPP

#include <cstdint>

namespace bfree {

/// SplitMix64 (Steele, Lea, Flood): state += 0x9e3779b97f4a7c15, then the
/// fixed xor-shift-multiply finalizer. split() seeds an independent stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  SplitMix64 split() { return SplitMix64(next()); }

  /// Uniform integer in [lo, hi], by rejection.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next();
    const std::uint64_t limit = ~0ull - (~0ull % span);
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return lo + v % span;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bfree

#endif  // BFREE_RANDOM_HPP
