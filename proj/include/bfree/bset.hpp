#ifndef BFREE_BSET_HPP
#define BFREE_BSET_HPP

// B-families: explicit and symbolic sets of moduli, truncation, primitive
// reduction, coprime extraction and lcm.

#include "bfree/common.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <variant>

namespace bfree {

class BFamily;

struct ExplicitMods {
  std::vector<std::uint64_t> mods;  // sorted, deduplicated, all >= 1
};

/// {p^2 : p prime, p <= limit}; no limit means the infinite family.
struct SquaresOfPrimes {
  std::optional<std::uint64_t> limit;
};

/// {p : p prime, p <= limit}; no limit means the infinite family.
struct PrimesOnly {
  std::optional<std::uint64_t> limit;
};

/// c * base. The Behrend flag is a caller assertion about `base`.
struct ScaledFamily {
  std::uint64_t c = 1;
  std::shared_ptr<const BFamily> base;
  std::optional<bool> behrend;
};

struct UnionFamily {
  std::vector<BFamily> parts;
};

class BFamily {
 public:
  using Descriptor = std::variant<ExplicitMods, SquaresOfPrimes, PrimesOnly, ScaledFamily, UnionFamily>;

  BFamily() : desc_(ExplicitMods{}) {}
  explicit BFamily(Descriptor d) : desc_(std::move(d)) {}

  static BFamily explicit_of(std::vector<std::uint64_t> mods) {
    for (auto b : mods)
      if (b == 0) throw Error(ErrorKind::InvalidArgument, "moduli must be positive");
    std::sort(mods.begin(), mods.end());
    mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
    return BFamily(ExplicitMods{std::move(mods)});
  }
  static BFamily squares_of_primes(std::optional<std::uint64_t> limit = std::nullopt) {
    return BFamily(SquaresOfPrimes{limit});
  }
  static BFamily primes(std::optional<std::uint64_t> limit = std::nullopt) {
    return BFamily(PrimesOnly{limit});
  }
  static BFamily scaled(std::uint64_t c, BFamily base, std::optional<bool> behrend = std::nullopt) {
    if (c == 0) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
    return BFamily(ScaledFamily{c, std::make_shared<const BFamily>(std::move(base)), behrend});
  }
  static BFamily union_of(std::vector<BFamily> parts) { return BFamily(UnionFamily{std::move(parts)}); }

  const Descriptor& descriptor() const { return desc_; }

  /// Sorted, deduplicated {b in B : b <= bound}.
  std::vector<std::uint64_t> truncate(std::uint64_t bound) const {
    std::vector<std::uint64_t> out;
    collect(bound, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// True when every symbolic block carries a limit, so the family can be
  /// materialized in full.
  bool is_bounded() const {
    return std::visit(
        [](const auto& d) -> bool {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitMods>) return true;
          else if constexpr (std::is_same_v<T, SquaresOfPrimes> || std::is_same_v<T, PrimesOnly>)
            return d.limit.has_value();
          else if constexpr (std::is_same_v<T, ScaledFamily>) return d.base->is_bounded();
          else
            return std::all_of(d.parts.begin(), d.parts.end(),
                               [](const BFamily& p) { return p.is_bounded(); });
        },
        desc_);
  }

  /// Largest element of a bounded family (0 for the empty family).
  std::uint64_t max_bound() const {
    return std::visit(
        [](const auto& d) -> std::uint64_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitMods>) return d.mods.empty() ? 0 : d.mods.back();
          else if constexpr (std::is_same_v<T, SquaresOfPrimes>) {
            if (!d.limit) throw Error(ErrorKind::InvalidArgument, "unbounded family");
            std::uint64_t p = *d.limit;
            return p > (1ull << 32) ? std::numeric_limits<std::uint64_t>::max() : p * p;
          } else if constexpr (std::is_same_v<T, PrimesOnly>) {
            if (!d.limit) throw Error(ErrorKind::InvalidArgument, "unbounded family");
            return *d.limit;
          } else if constexpr (std::is_same_v<T, ScaledFamily>) {
            std::uint64_t m = d.base->max_bound();
            return m > std::numeric_limits<std::uint64_t>::max() / d.c
                       ? std::numeric_limits<std::uint64_t>::max()
                       : m * d.c;
          } else {
            std::uint64_t m = 0;
            for (const auto& p : d.parts) m = std::max(m, p.max_bound());
            return m;
          }
        },
        desc_);
  }

  /// All moduli of a bounded family; throws for infinite descriptors.
  std::vector<std::uint64_t> materialize() const {
    if (!is_bounded())
      throw Error(ErrorKind::InvalidArgument, "family has an unbounded symbolic block; give a limit");
    return truncate(max_bound());
  }

  /// Whether B contains an infinite pairwise coprime subset. Exact for this
  /// descriptor taxonomy: only unscaled prime or prime-square blocks qualify,
  /// since every element of c*A with c > 1 shares the factor c.
  bool has_infinite_coprime_subset() const {
    return std::visit(
        [](const auto& d) -> bool {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitMods>) return false;
          else if constexpr (std::is_same_v<T, SquaresOfPrimes> || std::is_same_v<T, PrimesOnly>)
            return true;
          else if constexpr (std::is_same_v<T, ScaledFamily>)
            return d.c == 1 && d.base->has_infinite_coprime_subset();
          else
            return std::any_of(d.parts.begin(), d.parts.end(),
                               [](const BFamily& p) { return p.has_infinite_coprime_subset(); });
        },
        desc_);
  }

  /// Explicit families are finite; symbolic blocks stand for infinite sets.
  bool is_finite() const {
    return std::visit(
        [](const auto& d) -> bool {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitMods>) return true;
          else if constexpr (std::is_same_v<T, SquaresOfPrimes> || std::is_same_v<T, PrimesOnly>)
            return false;
          else if constexpr (std::is_same_v<T, ScaledFamily>) return d.base->is_finite();
          else
            return std::all_of(d.parts.begin(), d.parts.end(),
                               [](const BFamily& p) { return p.is_finite(); });
        },
        desc_);
  }

 private:
  void collect(std::uint64_t bound, std::vector<std::uint64_t>& out) const {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitMods>) {
            for (auto b : d.mods)
              if (b <= bound) out.push_back(b);
          } else if constexpr (std::is_same_v<T, SquaresOfPrimes>) {
            auto pmax = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(bound)));
            while (pmax > 0 && pmax > bound / pmax) --pmax;
            while ((pmax + 1) <= bound / (pmax + 1)) ++pmax;
            if (d.limit) pmax = std::min(pmax, *d.limit);
            for (auto p : arith::primes_up_to(pmax)) out.push_back(p * p);
          } else if constexpr (std::is_same_v<T, PrimesOnly>) {
            std::uint64_t pmax = d.limit ? std::min(bound, *d.limit) : bound;
            for (auto p : arith::primes_up_to(pmax)) out.push_back(p);
          } else if constexpr (std::is_same_v<T, ScaledFamily>) {
            std::vector<std::uint64_t> inner;
            d.base->collect(bound / d.c, inner);
            for (auto a : inner) out.push_back(a * d.c);
          } else {
            for (const auto& p : d.parts) p.collect(bound, out);
          }
        },
        desc_);
  }

  Descriptor desc_;
};

/// Pairwise coprime moduli, sorted.
struct CoprimeSubset {
  std::vector<std::uint64_t> elements;
};

/// Removes every element that has a proper divisor in the list. Input sorted.
inline std::vector<std::uint64_t> primitive_reduce_sorted(const std::vector<std::uint64_t>& mods) {
  std::vector<std::uint64_t> kept;
  if (mods.empty()) return kept;
  if (mods.front() == 1) return {1};
  const std::uint64_t top = mods.back();
  if (mods.size() > 64 && top <= (1ull << 27)) {
    // Mark multiples of kept elements; an element survives iff unmarked.
    std::vector<bool> hit(top + 1, false);
    for (auto b : mods) {
      if (hit[b]) continue;
      kept.push_back(b);
      for (std::uint64_t m = b; m <= top; m += b) hit[m] = true;
    }
    return kept;
  }
  for (auto b : mods) {
    bool divisible = std::any_of(kept.begin(), kept.end(), [b](std::uint64_t k) { return b % k == 0; });
    if (!divisible) kept.push_back(b);
  }
  return kept;
}

/// {b <= bound : no other b' in B divides b}, as an explicit family.
inline BFamily primitive_reduce(const BFamily& family, std::uint64_t bound) {
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "bound must be >= 1");
  return BFamily::explicit_of(primitive_reduce_sorted(family.truncate(bound)));
}

inline bool is_primitive(const std::vector<std::uint64_t>& mods) {
  for (std::size_t i = 0; i < mods.size(); ++i)
    for (std::size_t j = 0; j < mods.size(); ++j)
      if (i != j && mods[j] % mods[i] == 0) return false;
  return true;
}

/// Greedy ascending scan: keep b iff coprime to everything kept so far.
inline CoprimeSubset extract_coprime_subset(const std::vector<std::uint64_t>& sorted_mods) {
  CoprimeSubset out;
  for (auto b : sorted_mods) {
    bool ok = std::all_of(out.elements.begin(), out.elements.end(),
                          [b](std::uint64_t k) { return std::gcd(b, k) == 1; });
    if (ok) out.elements.push_back(b);
  }
  return out;
}

inline CoprimeSubset extract_coprime_subset(const BFamily& family, std::uint64_t bound) {
  auto mods = family.truncate(bound);
  if (mods.empty()) throw Error(ErrorKind::EmptyFamily, "truncation is empty");
  return extract_coprime_subset(mods);
}

inline BigInt lcm_of(const std::vector<std::uint64_t>& mods) {
  if (mods.empty()) throw Error(ErrorKind::EmptyFamily, "lcm of an empty family");
  BigInt l = 1;
  for (auto b : mods) l = arith::big_lcm(l, BigInt(b));
  return l;
}

inline BigInt lcm_of(const BFamily& family, std::uint64_t bound) { return lcm_of(family.truncate(bound)); }

/// lcm as a machine word when it fits the budget, otherwise StepOverflowBudget.
inline std::uint64_t lcm_within(const std::vector<std::uint64_t>& mods, const Budget& budget) {
  const unsigned bits = std::min(64u, budget.lcm_bits);
  std::uint64_t l = 1;
  for (auto b : mods) {
    auto next = arith::checked_lcm(l, b);
    if (!next || (bits < 64 && *next >> bits) != 0)
      throw Error(ErrorKind::StepOverflowBudget,
                  "lcm of " + std::to_string(mods.size()) + " moduli exceeds " + std::to_string(bits) + " bits");
    l = *next;
  }
  return l;
}

}  // namespace bfree

#endif  // BFREE_BSET_HPP
