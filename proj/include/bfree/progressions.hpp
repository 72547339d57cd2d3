#ifndef BFREE_PROGRESSIONS_HPP
#define BFREE_PROGRESSIONS_HPP

// Exact algebra of arithmetic progressions: CRT intersection, disjoint
// normalization of finite unions and exact rational densities.

#include "bfree/common.hpp"
#include "bfree/random.hpp"

#include <span>

namespace bfree {

/// step*Z + offset with 0 <= offset < step.
class Progression {
 public:
  Progression(BigInt step, BigInt offset) : step_(std::move(step)) {
    if (step_ <= 0) throw Error(ErrorKind::InvalidArgument, "progression step must be positive");
    offset_ = offset % step_;
    if (offset_ < 0) offset_ += step_;
  }
  Progression(std::uint64_t step, std::int64_t offset) : Progression(BigInt(step), BigInt(offset)) {}

  const BigInt& step() const { return step_; }
  const BigInt& offset() const { return offset_; }
  bool contains(const BigInt& n) const {
    BigInt r = n % step_;
    if (r < 0) r += step_;
    return r == offset_;
  }
  Rational density() const { return Rational(BigInt(1), step_); }

  friend bool operator==(const Progression& a, const Progression& b) {
    return a.step_ == b.step_ && a.offset_ == b.offset_;
  }

 private:
  BigInt step_;
  BigInt offset_;
};

namespace detail {

/// Returns (g, x) with a*x == g (mod m), g = gcd(a, m).
inline std::pair<BigInt, BigInt> ext_gcd(BigInt a, BigInt m) {
  BigInt old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  return {old_r, old_s};
}

/// Merges two congruences; nullopt when gcd(m1, m2) does not divide a2 - a1.
inline std::optional<Progression> merge(const Progression& p, const Progression& q) {
  const BigInt& m1 = p.step();
  const BigInt& m2 = q.step();
  BigInt diff = q.offset() - p.offset();
  auto [g, inv] = ext_gcd(m1, m2);
  if (diff % g != 0) return std::nullopt;
  BigInt m2g = m2 / g;
  BigInt t = (diff / g) * inv % m2g;
  if (t < 0) t += m2g;
  return Progression(m1 * m2g, p.offset() + m1 * t);
}

}  // namespace detail

/// Intersection of progressions: a progression of step lcm, or nullopt when
/// the congruence system is unsolvable.
inline std::optional<Progression> intersect(std::span<const Progression> ps) {
  if (ps.empty()) throw Error(ErrorKind::InvalidArgument, "intersect needs at least one progression");
  std::optional<Progression> acc = ps[0];
  for (std::size_t i = 1; i < ps.size() && acc; ++i) acc = detail::merge(*acc, ps[i]);
  return acc;
}

/// Residue set modulo a common step.
struct ProgressionSet {
  std::uint64_t common_step = 1;
  std::vector<std::uint64_t> residues;  // sorted, each < common_step

  Rational density() const { return Rational(BigInt(residues.size()), BigInt(common_step)); }
  bool contains(std::int64_t n) const {
    return std::binary_search(residues.begin(), residues.end(), arith::floor_mod(n, common_step));
  }
};

/// Common step = lcm of steps; residues enumerated exactly.
inline ProgressionSet normalize_union(std::span<const Progression> ps, const Budget& budget = {}) {
  ProgressionSet out;
  if (ps.empty()) return out;
  BigInt L = 1;
  for (const auto& p : ps) L = arith::big_lcm(L, p.step());
  if (arith::bit_length(L) > std::min(64u, budget.lcm_bits))
    throw Error(ErrorKind::StepOverflowBudget, "lcm " + L.str() + " exceeds the bit budget");
  if (L > budget.max_period_scan)
    throw Error(ErrorKind::StepOverflowBudget, "period " + L.str() + " exceeds the residue scan budget");
  const auto period = L.convert_to<std::uint64_t>();
  std::vector<bool> hit(period, false);
  for (const auto& p : ps) {
    const auto step = p.step().convert_to<std::uint64_t>();
    for (auto r = p.offset().convert_to<std::uint64_t>(); r < period; r += step) hit[r] = true;
  }
  out.common_step = period;
  for (std::uint64_t r = 0; r < period; ++r)
    if (hit[r]) out.residues.push_back(r);
  return out;
}

/// Density of a union by inclusion-exclusion over CRT intersections. Exact
/// for any step sizes; cost is exponential in the number of progressions.
inline Rational union_density(std::span<const Progression> ps) {
  if (ps.size() > 30) throw Error(ErrorKind::BudgetExceeded, "too many progressions for inclusion-exclusion");
  Rational total = 0;
  // Depth-first over subsets; an empty intersection prunes all its supersets.
  auto rec = [&](auto&& self, std::size_t from, const Progression& acc, int size) -> void {
    for (std::size_t i = from; i < ps.size(); ++i) {
      auto next = detail::merge(acc, ps[i]);
      if (!next) continue;
      Rational term(BigInt(1), next->step());
      if (size % 2 == 0) total -= term;
      else total += term;
      self(self, i + 1, *next, size + 1);
    }
  };
  for (std::size_t i = 0; i < ps.size(); ++i) {
    total += Rational(BigInt(1), ps[i].step());
    rec(rec, i + 1, ps[i], 2);
  }
  return total;
}

struct RogersResult {
  Rational lhs;  // density of the shifted union
  Rational rhs;  // density of the union of b_k Z
  bool holds = false;
};

/// Compares d(U (b_k Z + r_k)) with d(U b_k Z).
inline RogersResult rogers_check(std::span<const std::uint64_t> mods, std::span<const std::uint64_t> residues) {
  if (mods.size() != residues.size())
    throw Error(ErrorKind::InvalidArgument, "moduli and residues differ in length");
  std::vector<Progression> shifted, plain;
  for (std::size_t k = 0; k < mods.size(); ++k) {
    if (mods[k] == 0 || residues[k] >= mods[k])
      throw Error(ErrorKind::InvalidArgument, "need 0 <= r_k < b_k");
    shifted.emplace_back(BigInt(mods[k]), BigInt(residues[k]));
    plain.emplace_back(BigInt(mods[k]), BigInt(0));
  }
  RogersResult r;
  r.lhs = union_density(shifted);
  r.rhs = union_density(plain);
  r.holds = r.lhs >= r.rhs;
  return r;
}

struct RogersFuzzReport {
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> examples;  // first violations
};

/// Random instances: K in [1, max_k], b_k in [1, max_mod], r_k in [0, b_k).
inline RogersFuzzReport rogers_fuzz(std::uint64_t count, std::uint64_t seed, std::uint64_t max_k = 6,
                                    std::uint64_t max_mod = 50) {
  if (max_k < 1 || max_mod < 1) throw Error(ErrorKind::InvalidArgument, "max_k and max_mod must be >= 1");
  SplitMix64 rng(seed);
  RogersFuzzReport rep;
  for (std::uint64_t t = 0; t < count; ++t) {
    const auto k = rng.uniform(1, max_k);
    std::vector<std::uint64_t> mods, res;
    for (std::uint64_t i = 0; i < k; ++i) {
      mods.push_back(rng.uniform(1, max_mod));
      res.push_back(rng.uniform(0, mods.back() - 1));
    }
    ++rep.instances;
    if (!rogers_check(mods, res).holds) {
      ++rep.violations;
      if (rep.examples.size() < 10) rep.examples.emplace_back(mods, res);
    }
  }
  return rep;
}

}  // namespace bfree

#endif  // BFREE_PROGRESSIONS_HPP
