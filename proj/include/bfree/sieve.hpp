#ifndef BFREE_SIEVE_HPP
#define BFREE_SIEVE_HPP

// Segmented generation of eta = 1_{F_B} over integer windows, plus the
// statistics computed directly on sieved windows.

#include "bfree/block.hpp"
#include "bfree/bset.hpp"
#include "bfree/parallel.hpp"

#include <bit>
#include <cstring>
#include <deque>
#include <istream>
#include <ostream>
#include <span>
#include <unordered_map>

namespace bfree {

/// eta restricted to [start, start + length): bit i is eta(start + i).
struct EtaWindow {
  std::int64_t start = 0;
  std::uint64_t length = 0;
  std::vector<std::uint64_t> words;
  std::vector<std::uint64_t> moduli;  // truncation that was sieved

  bool bit(std::uint64_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
  bool at(std::int64_t n) const { return bit(static_cast<std::uint64_t>(n - start)); }
  std::int64_t end() const { return start + static_cast<std::int64_t>(length); }

  std::uint64_t count_ones() const {
    std::uint64_t c = 0;
    for (auto w : words) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  /// Bits [i, i + n) packed little-endian into one word (n <= 64).
  std::uint64_t extract(std::uint64_t i, unsigned n) const {
    const std::uint64_t w = i >> 6;
    const unsigned s = static_cast<unsigned>(i & 63);
    std::uint64_t v = words[w] >> s;
    if (s != 0 && w + 1 < words.size()) v |= words[w + 1] << (64 - s);
    return n == 64 ? v : v & ((1ull << n) - 1);
  }

  Block slice(std::uint64_t i, std::size_t n) const {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t k = 0; k < n; ++k) bits[k] = bit(i + k);
    return Block(std::move(bits));
  }

  std::string to_string() const {
    std::string s(length, '0');
    for (std::uint64_t i = 0; i < length; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }
};

struct SieveOptions {
  std::uint64_t chunk_bits = 1ull << 20;  // multiple of 64
  Parallelism parallelism{};
};

/// eta(n) by trial division against the given moduli.
inline bool is_free(std::span<const std::uint64_t> mods, std::int64_t n) {
  for (auto b : mods)
    if (arith::floor_mod(n, b) == 0) return false;
  return true;
}

/// Sieves the explicit list of moduli over [start, start + length).
inline EtaWindow sieve_moduli(std::vector<std::uint64_t> mods, std::int64_t start, std::uint64_t length,
                              const SieveOptions& opts = {}) {
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "window length must be >= 1");
  EtaWindow w;
  w.start = start;
  w.length = length;
  w.moduli = std::move(mods);
  w.words.assign((length + 63) / 64, ~0ull);
  if (length % 64) w.words.back() = (1ull << (length % 64)) - 1;

  const std::uint64_t chunk = std::max<std::uint64_t>(64, opts.chunk_bits / 64 * 64);
  const std::uint64_t n_chunks = (length + chunk - 1) / chunk;
  const bool has_one = !w.moduli.empty() && w.moduli.front() == 1;

  parallel_for(n_chunks, opts.parallelism, [&](std::size_t c) {
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(length, lo + chunk);
    if (has_one) {
      for (std::uint64_t i = lo / 64; i < (hi + 63) / 64; ++i) w.words[i] = 0;
      return;
    }
    const std::int64_t base = start + static_cast<std::int64_t>(lo);
    for (auto b : w.moduli) {
      const std::uint64_t r = arith::floor_mod(base, b);
      std::uint64_t i = lo + (r == 0 ? 0 : b - r);
      for (; i < hi; i += b) w.words[i >> 6] &= ~(1ull << (i & 63));
    }
  });
  return w;
}

/// Sieves the family over [start, start + length). Only moduli up to the
/// largest |n| in the window can divide a nonzero n; 0 is always marked.
inline EtaWindow sieve_window(const BFamily& family, std::int64_t start, std::uint64_t length,
                              const SieveOptions& opts = {}) {
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "window length must be >= 1");
  const std::int64_t last = start + static_cast<std::int64_t>(length) - 1;
  auto absu = [](std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  };
  const std::uint64_t bound = std::max<std::uint64_t>(1, std::max(absu(start), absu(last)));
  auto mods = family.truncate(bound);
  EtaWindow w = sieve_moduli(mods, start, length, opts);
  if (start <= 0 && last >= 0) {
    const bool nonempty = !mods.empty() || !family.is_finite() || !family.truncate(family.max_bound()).empty();
    if (nonempty) {
      const auto i = static_cast<std::uint64_t>(-start);
      w.words[i >> 6] &= ~(1ull << (i & 63));
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Raw encoding: 16-byte header (start as LE int64, length as LE uint64)
// followed by ceil(length / 8) bytes; bit i lives in byte i/8, bit i%8.

inline void write_raw(std::ostream& os, const EtaWindow& w) {
  auto put64 = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) os.put(static_cast<char>((v >> (8 * k)) & 0xff));
  };
  put64(static_cast<std::uint64_t>(w.start));
  put64(w.length);
  const std::uint64_t nbytes = (w.length + 7) / 8;
  for (std::uint64_t i = 0; i < nbytes; ++i)
    os.put(static_cast<char>((w.words[i / 8] >> (8 * (i % 8))) & 0xff));
}

inline EtaWindow read_raw(std::istream& is) {
  auto get64 = [&]() {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
      int c = is.get();
      if (c == EOF) throw Error(ErrorKind::ParseError, "truncated raw header");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * k);
    }
    return v;
  };
  EtaWindow w;
  w.start = static_cast<std::int64_t>(get64());
  w.length = get64();
  w.words.assign((w.length + 63) / 64, 0);
  const std::uint64_t nbytes = (w.length + 7) / 8;
  for (std::uint64_t i = 0; i < nbytes; ++i) {
    int c = is.get();
    if (c == EOF) throw Error(ErrorKind::ParseError, "truncated raw payload");
    w.words[i / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (i % 8));
  }
  return w;
}

// ---------------------------------------------------------------------------

struct GapReport {
  std::vector<std::int64_t> positions;  // free positions, increasing
  std::vector<std::uint64_t> gaps;      // consecutive differences
  /// min_window_gaps[K] = max_j min_{0<=k<=K} gaps[j+k]
  std::vector<std::uint64_t> min_window_gaps;
};

/// max over j of min(gaps[j..j+K]) for K = 0..k_max, via sliding-window minima.
inline std::vector<std::uint64_t> min_window_gaps(std::span<const std::uint64_t> gaps, std::size_t k_max) {
  std::vector<std::uint64_t> out(k_max + 1, 0);
  for (std::size_t K = 0; K <= k_max; ++K) {
    const std::size_t span = K + 1;
    if (gaps.size() < span) break;
    std::deque<std::size_t> dq;  // indices with increasing gap values
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      while (!dq.empty() && gaps[dq.back()] >= gaps[i]) dq.pop_back();
      dq.push_back(i);
      if (dq.front() + span <= i) dq.pop_front();
      if (i + 1 >= span) best = std::max(best, gaps[dq.front()]);
    }
    out[K] = best;
  }
  return out;
}

inline GapReport gap_statistics(const EtaWindow& window, std::size_t k_max) {
  GapReport r;
  for (std::uint64_t wi = 0; wi < window.words.size(); ++wi) {
    std::uint64_t v = window.words[wi];
    while (v) {
      const auto i = wi * 64 + static_cast<std::uint64_t>(std::countr_zero(v));
      r.positions.push_back(window.start + static_cast<std::int64_t>(i));
      v &= v - 1;
    }
  }
  if (r.positions.size() < k_max + 2)
    throw Error(ErrorKind::InsufficientFreePositions,
                "window holds " + std::to_string(r.positions.size()) + " free positions, need " +
                    std::to_string(k_max + 2));
  r.gaps.reserve(r.positions.size() - 1);
  for (std::size_t j = 1; j < r.positions.size(); ++j)
    r.gaps.push_back(static_cast<std::uint64_t>(r.positions[j] - r.positions[j - 1]));
  r.min_window_gaps = min_window_gaps(r.gaps, k_max);
  return r;
}

struct ZeroBlockScan {
  bool found = false;
  std::uint64_t occurrences = 0;          // start positions of k-zero runs
  std::int64_t first = 0;                 // first start position (if found)
  std::uint64_t max_gap_between_occurrences = 0;  // 0 when fewer than two
};

/// Every start position s with eta(s) = ... = eta(s+k-1) = 0 is an occurrence.
inline ZeroBlockScan zero_block_scan(const EtaWindow& window, std::uint64_t k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  ZeroBlockScan out;
  std::uint64_t run = 0;
  std::int64_t prev = 0;
  for (std::uint64_t i = 0; i < window.length; ++i) {
    run = window.bit(i) ? 0 : run + 1;
    if (run >= k) {
      const std::int64_t s = window.start + static_cast<std::int64_t>(i + 1 - k);
      if (out.found) out.max_gap_between_occurrences =
          std::max(out.max_gap_between_occurrences, static_cast<std::uint64_t>(s - prev));
      else out.first = s;
      out.found = true;
      ++out.occurrences;
      prev = s;
    }
  }
  return out;
}

struct BlockFrequency {
  Block block;
  std::uint64_t count = 0;
  std::uint64_t window_length = 0;  // number of block positions sampled
  Rational frequency;
  std::optional<Rational> exact;    // residue count over one period (finite B)
};

struct WindowSpec {
  std::int64_t start = 1;
  std::uint64_t length = 0;
};

namespace detail {
template <class Map>
void count_blocks(const EtaWindow& w, unsigned len, Map& counts, std::uint64_t positions) {
  for (std::uint64_t i = 0; i < positions; ++i) ++counts[w.extract(i, len)];
}
}  // namespace detail

/// Empirical frequencies of all length-`block_length` blocks observed on the
/// given windows; exact Mirsky frequencies are attached for finite families
/// whose period fits the scan budget.
inline std::vector<BlockFrequency> block_frequencies(const BFamily& family, unsigned block_length,
                                                     const std::vector<WindowSpec>& windows,
                                                     const SieveOptions& opts = {}, const Budget& budget = {}) {
  if (block_length < 1 || block_length > 24)
    throw Error(ErrorKind::BudgetExceeded, "block length must be in [1, 24]");
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& ws : windows) {
    if (ws.length < block_length) continue;
    EtaWindow w = sieve_window(family, ws.start, ws.length, opts);
    const std::uint64_t positions = ws.length - block_length + 1;
    detail::count_blocks(w, block_length, counts, positions);
    total += positions;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> exact_counts;
  std::uint64_t period = 0;
  if (family.is_finite()) {
    try {
      auto mods = family.materialize();
      period = lcm_within(mods, budget);
      if (period > budget.max_period_scan) period = 0;
      if (period) {
        EtaWindow w = sieve_moduli(mods, 0, period + block_length - 1, opts);
        detail::count_blocks(w, block_length, exact_counts, period);
      }
    } catch (const Error&) {
      period = 0;
    }
  }

  std::vector<std::uint64_t> codes;
  for (const auto& [c, n] : counts) codes.push_back(c);
  for (const auto& [c, n] : exact_counts)
    if (!counts.count(c)) codes.push_back(c);
  std::sort(codes.begin(), codes.end());

  std::vector<BlockFrequency> out;
  for (auto c : codes) {
    BlockFrequency f;
    f.block = Block::from_code(c, block_length);
    auto it = counts.find(c);
    f.count = it == counts.end() ? 0 : it->second;
    f.window_length = total;
    f.frequency = total ? Rational(BigInt(f.count), BigInt(total)) : Rational(0);
    if (period) {
      auto e = exact_counts.find(c);
      f.exact = Rational(BigInt(e == exact_counts.end() ? 0 : e->second), BigInt(period));
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// Windows [1, 2^k] for k = k_min..k_max: the default quasi-generic sequence.
inline std::vector<WindowSpec> power_of_two_windows(unsigned k_min, unsigned k_max) {
  std::vector<WindowSpec> out;
  for (unsigned k = k_min; k <= k_max; ++k) out.push_back({1, 1ull << k});
  return out;
}

}  // namespace bfree

#endif  // BFREE_SIEVE_HPP
