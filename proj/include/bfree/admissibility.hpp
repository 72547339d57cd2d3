#ifndef BFREE_ADMISSIBILITY_HPP
#define BFREE_ADMISSIBILITY_HPP

// Block-level decisions: admissibility and deficiency signatures, the
// residue placement problem behind eta-admissibility, searches on eta and
// exact counts of admissible words.

#include "bfree/sieve.hpp"

#include <cmath>
#include <set>

namespace bfree {

/// s_b = b - |supp mod b| for every modulus b.
struct YSignature {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> deficiency;  // (b, s_b)

  bool admissible() const {
    return std::all_of(deficiency.begin(), deficiency.end(), [](const auto& e) { return e.second >= 1; });
  }
  bool in_Y() const {
    return std::all_of(deficiency.begin(), deficiency.end(), [](const auto& e) { return e.second == 1; });
  }
  std::uint64_t of(std::uint64_t b) const {
    for (const auto& [m, s] : deficiency)
      if (m == b) return s;
    throw Error(ErrorKind::InvalidArgument, "modulus " + std::to_string(b) + " not in signature");
  }
};

inline std::size_t residues_hit(const std::vector<std::int64_t>& support, std::uint64_t b) {
  std::vector<std::uint64_t> r;
  r.reserve(support.size());
  for (auto p : support) r.push_back(arith::floor_mod(p, b));
  std::sort(r.begin(), r.end());
  return static_cast<std::size_t>(std::unique(r.begin(), r.end()) - r.begin());
}

inline YSignature admissible(const Block& block, const std::vector<std::uint64_t>& mods) {
  YSignature sig;
  const auto supp = block.support();
  for (auto b : mods) {
    if (b == 0) throw Error(ErrorKind::InvalidArgument, "modulus 0");
    sig.deficiency.emplace_back(b, b - residues_hit(supp, b));
  }
  return sig;
}

inline YSignature admissible(const Block& block, const BFamily& family) {
  return admissible(block, family.materialize());
}

// ---------------------------------------------------------------------------

/// Offsets n_b with A disjoint from bZ + n_b and gcd(b, b') | n_b - n_b'.
struct TherWitness {
  bool satisfiable = false;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> assignment;  // (b, n_b), b ascending
};

/// Exhaustive backtracking; moduli are tried in descending order and
/// residues in increasing order, so the witness is deterministic.
inline TherWitness ther_solve(const std::vector<std::int64_t>& support, std::vector<std::uint64_t> mods) {
  std::sort(mods.begin(), mods.end(), std::greater<>());
  mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
  const std::size_t m = mods.size();
  std::vector<std::vector<std::uint64_t>> candidates(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t b = mods[i];
    if (b == 0) throw Error(ErrorKind::InvalidArgument, "modulus 0");
    std::vector<bool> hit(b, false);
    std::size_t n_hit = 0;
    for (auto p : support) {
      auto r = arith::floor_mod(p, b);
      if (!hit[r]) ++n_hit, hit[r] = true;
    }
    if (n_hit == b) return {};
    for (std::uint64_t r = 0; r < b; ++r)
      if (!hit[r]) candidates[i].push_back(r);
  }
  std::vector<std::vector<std::uint64_t>> g(m, std::vector<std::uint64_t>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g[i][j] = std::gcd(mods[i], mods[j]);

  std::vector<std::uint64_t> chosen(m);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) return true;
    for (auto r : candidates[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if (g[i][j] > 1 && (r % g[i][j]) != (chosen[j] % g[i][j])) ok = false;
      if (!ok) continue;
      chosen[i] = r;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  TherWitness w;
  if (!rec(rec, 0)) return w;
  w.satisfiable = true;
  for (std::size_t i = m; i-- > 0;) w.assignment.emplace_back(mods[i], chosen[i]);
  return w;
}

inline bool ther_witness_valid(const std::vector<std::int64_t>& support, const TherWitness& w) {
  if (!w.satisfiable) return false;
  for (const auto& [b, nb] : w.assignment)
    for (auto p : support)
      if (arith::floor_mod(p, b) == nb) return false;
  for (const auto& [b, nb] : w.assignment)
    for (const auto& [c, nc] : w.assignment) {
      const auto g = std::gcd(b, c);
      if (nb % g != nc % g) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

struct EtaSearchResult {
  std::optional<std::int64_t> found_at;  // smallest k with the match on [k+1, k+n]
  bool definitive = false;               // a NotFound covers every residue class
  std::uint64_t offsets_searched = 0;
};

namespace detail {
/// Does the block match eta on positions [i, i+n) of the window?
inline bool block_matches(const EtaWindow& w, std::uint64_t i, const std::vector<std::uint64_t>& code,
                          std::size_t n, bool dominated) {
  for (std::size_t c = 0; c < code.size(); ++c) {
    const unsigned len = static_cast<unsigned>(std::min<std::size_t>(64, n - 64 * c));
    const std::uint64_t v = w.extract(i + 64 * c, len);
    if (dominated ? (code[c] & ~v) != 0 : code[c] != v) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> block_words(const Block& block) {
  std::vector<std::uint64_t> out((block.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < block.size(); ++i)
    if (block[i]) out[i / 64] |= 1ull << (i % 64);
  return out;
}
}  // namespace detail

/// Scans a presieved window: offsets i with window positions [i, i+n).
/// Reported k is the absolute position of the match minus one.
inline EtaSearchResult eta_admissible_search(const Block& block, const EtaWindow& window, bool dominated,
                                             std::optional<std::uint64_t> period = std::nullopt) {
  if (block.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty block");
  EtaSearchResult res;
  if (window.length < block.size()) return res;
  const auto code = detail::block_words(block);
  const std::uint64_t offsets = window.length - block.size() + 1;
  for (std::uint64_t i = 0; i < offsets; ++i) {
    ++res.offsets_searched;
    if (detail::block_matches(window, i, code, block.size(), dominated)) {
      res.found_at = window.start + static_cast<std::int64_t>(i) - 1;
      res.definitive = true;
      return res;
    }
  }
  res.definitive = period.has_value() && offsets >= *period;
  return res;
}

/// Smallest k in [0, search_bound) with eta[k+1, k+n] equal to (or, in
/// dominated mode, coordinatewise above) the block.
inline EtaSearchResult eta_admissible_search(const Block& block, const BFamily& family, std::uint64_t search_bound,
                                             bool dominated, const SieveOptions& opts = {},
                                             const Budget& budget = {}) {
  if (search_bound < 1) throw Error(ErrorKind::InvalidArgument, "search bound must be >= 1");
  if (block.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty block");
  std::optional<std::uint64_t> period;
  if (family.is_finite()) {
    auto mods = family.materialize();
    try {
      period = mods.empty() ? 1 : lcm_within(mods, budget);
    } catch (const Error&) {
    }
  }
  const std::uint64_t offsets = period ? std::min(search_bound, *period) : search_bound;
  EtaWindow w = sieve_window(family, 1, offsets + block.size() - 1, opts);
  return eta_admissible_search(block, w, dominated, period);
}

/// Distinct length-n words read on the window, with their first offset.
inline std::map<std::uint64_t, std::int64_t> observed_words(const EtaWindow& window, unsigned n) {
  if (n < 1 || n > 64) throw Error(ErrorKind::InvalidArgument, "word length must be in [1, 64]");
  std::map<std::uint64_t, std::int64_t> out;
  if (window.length < n) return out;
  for (std::uint64_t i = 0; i + n <= window.length; ++i)
    out.emplace(window.extract(i, n), window.start + static_cast<std::int64_t>(i) - 1);
  return out;
}

// ---------------------------------------------------------------------------

enum class CountMode { AllAdmissible, EtaDominated, DeficiencyAtLeast };

struct CountOptions {
  std::size_t max_n = 28;
  std::size_t max_states = 1u << 22;
  Budget budget{};
  std::vector<std::uint64_t> deficiency;  // s_b per modulus (DeficiencyAtLeast), in family order
};

namespace detail {

/// Number of words of length n whose support hits at most b - s_b residues
/// mod b for every modulus. Forward DP over positions; the state is the set
/// of residues hit so far for each constraining modulus.
inline BigInt count_by_deficiency(const std::vector<std::uint64_t>& mods, const std::vector<std::uint64_t>& need,
                                  std::size_t n, std::size_t max_states) {
  struct Constraint {
    std::uint64_t b;
    std::uint64_t max_hits;
  };
  std::vector<Constraint> cons;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    const std::uint64_t b = mods[i], s = need[i];
    if (s > b) return BigInt(0);
    const std::uint64_t cap = b - s;
    if (cap >= std::min<std::uint64_t>(b, n)) continue;  // can never be violated
    cons.push_back({b, cap});
  }
  // Residues of positions 1..n mod b take at most min(b, n) values; each
  // constraint owns that many bits of the state.
  using State = std::vector<std::uint32_t>;
  std::map<State, BigInt> cur;
  cur.emplace(State(cons.size(), 0u), BigInt(1));
  for (std::size_t pos = 1; pos <= n; ++pos) {
    std::map<State, BigInt> next;
    for (auto& [st, cnt] : cur) {
      next[st] += cnt;  // symbol 0
      State s1 = st;
      bool ok = true;
      for (std::size_t c = 0; c < cons.size() && ok; ++c) {
        const auto idx = static_cast<unsigned>(pos % cons[c].b);
        s1[c] |= 1u << idx;
        if (static_cast<std::uint64_t>(std::popcount(s1[c])) > cons[c].max_hits) ok = false;
      }
      if (ok) next[s1] += cnt;
    }
    if (next.size() > max_states) throw Error(ErrorKind::BudgetExceeded, "admissible-word DP exceeded state budget");
    cur = std::move(next);
  }
  BigInt total = 0;
  for (auto& [st, cnt] : cur) total += cnt;
  return total;
}

/// Keeps the masks not strictly dominated by another one.
inline std::vector<std::uint64_t> maximal_masks(std::vector<std::uint64_t> masks) {
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::uint64_t> out;
  for (auto m : masks) {
    bool dominated = false;
    for (auto o : masks)
      if (o != m && (m & ~o) == 0) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(m);
  }
  return out;
}

/// |union of down-sets of masks|, splitting on one coordinate at a time.
inline BigInt count_down_union(std::vector<std::uint64_t> masks, std::map<std::vector<std::uint64_t>, BigInt>& memo,
                               std::size_t& budget) {
  masks = maximal_masks(std::move(masks));
  if (masks.empty()) return 0;
  if (masks.size() == 1) return BigInt(1) << std::popcount(masks[0]);
  if (auto it = memo.find(masks); it != memo.end()) return it->second;
  if (budget == 0) throw Error(ErrorKind::BudgetExceeded, "dominated-word count exceeded budget");
  --budget;
  std::uint64_t all = 0;
  for (auto m : masks) all |= m;
  const std::uint64_t x = 1ull << (63 - std::countl_zero(all));
  std::vector<std::uint64_t> without, with;
  for (auto m : masks) {
    without.push_back(m & ~x);
    if (m & x) with.push_back(m & ~x);
  }
  BigInt r = count_down_union(without, memo, budget) + count_down_union(with, memo, budget);
  memo.emplace(std::move(masks), r);
  return r;
}

}  // namespace detail

/// Exact count of length-n words in the chosen class.
///   AllAdmissible: support misses a residue mod every b.
///   EtaDominated: distinct words below some length-n window of eta
///     (all offsets of one period of the finite family).
///   DeficiencyAtLeast: support misses at least s_b residues mod b.
inline BigInt count_admissible_blocks(const std::vector<std::uint64_t>& mods, std::size_t n, CountMode mode,
                                      const CountOptions& opts = {}) {
  if (n > opts.max_n)
    throw Error(ErrorKind::BudgetExceeded, "word length " + std::to_string(n) + " exceeds enumeration budget");
  for (auto b : mods)
    if (b == 0) throw Error(ErrorKind::InvalidArgument, "modulus 0");
  if (n == 0) return 1;
  switch (mode) {
    case CountMode::AllAdmissible:
      return detail::count_by_deficiency(mods, std::vector<std::uint64_t>(mods.size(), 1), n, opts.max_states);
    case CountMode::DeficiencyAtLeast:
      if (opts.deficiency.size() != mods.size())
        throw Error(ErrorKind::InvalidArgument, "one deficiency per modulus required");
      return detail::count_by_deficiency(mods, opts.deficiency, n, opts.max_states);
    case CountMode::EtaDominated: {
      const std::uint64_t period = mods.empty() ? 1 : lcm_within(mods, opts.budget);
      if (period > opts.budget.max_period_scan)
        throw Error(ErrorKind::BudgetExceeded, "period exceeds scan budget");
      EtaWindow w = sieve_moduli(mods, 1, period + n - 1);
      std::vector<std::uint64_t> masks;
      for (std::uint64_t i = 0; i < period; ++i) masks.push_back(w.extract(i, static_cast<unsigned>(n)));
      std::map<std::vector<std::uint64_t>, BigInt> memo;
      std::size_t budget = opts.max_states;
      return detail::count_down_union(std::move(masks), memo, budget);
    }
  }
  return 0;
}

struct EntropyPoint {
  std::size_t n = 0;
  BigInt count;
  double estimate = 0;  // (1/n) log2 count
};

inline double log2_big(const BigInt& v) {
  if (v <= 0) throw Error(ErrorKind::InvalidArgument, "log of a non-positive count");
  const auto bits = arith::bit_length(v);
  if (bits <= 60) return std::log2(v.convert_to<double>());
  const unsigned shift = static_cast<unsigned>(bits - 60);
  BigInt top = v >> shift;
  return std::log2(top.convert_to<double>()) + shift;
}

/// Plug-in estimates (1/n) log2 count(n) over the grid.
inline std::vector<EntropyPoint> entropy_estimate(const std::vector<std::uint64_t>& mods,
                                                  const std::vector<std::size_t>& n_grid,
                                                  CountMode mode = CountMode::EtaDominated,
                                                  const CountOptions& opts = {}) {
  std::vector<EntropyPoint> out;
  for (auto n : n_grid) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    EntropyPoint p;
    p.n = n;
    p.count = count_admissible_blocks(mods, n, mode, opts);
    p.estimate = log2_big(p.count) / static_cast<double>(n);
    out.push_back(std::move(p));
  }
  return out;
}

struct EntropyLowerBound {
  std::size_t n = 0;
  double best = 0;  // max over offsets of ones/n: every word below that window is dominated
  double mean = 0;  // mean ones/n over the offsets
};

/// Lower bound for (1/n) log2 #dominated words from the supports of eta windows
/// [k+1, k+n], k in [0, offsets).
inline EntropyLowerBound entropy_lower_bound(const BFamily& family, std::size_t n, std::uint64_t offsets,
                                             const SieveOptions& sopts = {}) {
  if (n < 1 || offsets < 1) throw Error(ErrorKind::InvalidArgument, "n and offsets must be >= 1");
  EtaWindow w = sieve_window(family, 1, offsets + n - 1, sopts);
  EntropyLowerBound lb;
  lb.n = n;
  std::uint64_t ones = 0, best = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) ones += w.bit(i);
  for (std::uint64_t k = 0;; ++k) {
    best = std::max(best, ones);
    total += ones;
    if (k + 1 == offsets) break;
    ones = ones - w.bit(k) + w.bit(k + n);
  }
  lb.best = static_cast<double>(best) / static_cast<double>(n);
  lb.mean = static_cast<double>(total) / static_cast<double>(offsets) / static_cast<double>(n);
  return lb;
}

}  // namespace bfree

#endif  // BFREE_ADMISSIBILITY_HPP
