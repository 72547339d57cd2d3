#ifndef BFREE_TAUT_HPP
#define BFREE_TAUT_HPP

// Taut reduction of families whose infinite blocks carry Behrend flags, and
// an empirical comparison of the block statistics before and after.

#include "bfree/sieve.hpp"

#include <cmath>

namespace bfree {

enum class TautStop { Step0, StepN, StepInfinity };

inline const char* to_string(TautStop s) {
  switch (s) {
    case TautStop::Step0: return "Step0";
    case TautStop::StepN: return "StepN";
    case TautStop::StepInfinity: return "StepInfinity";
  }
  return "unknown";
}

struct TautStep {
  std::uint64_t c = 0;
  std::vector<std::uint64_t> removed_explicit;  // explicit moduli divisible by c
  std::size_t removed_blocks = 0;               // symbolic blocks absorbed into cZ
};

struct TautReduction {
  BFamily input;
  std::vector<TautStep> steps;
  BFamily output;  // explicit, truncated at `truncation`
  std::uint64_t truncation = 0;
  TautStop stopped_at = TautStop::Step0;
  std::size_t n_steps() const { return steps.size(); }
};

struct TautOptions {
  std::uint64_t truncation = 1'000'000;  // used when the family has unbounded blocks
  std::size_t max_steps = 64;
};

namespace detail {

struct FlatBlock {
  std::uint64_t scale = 1;   // effective multiplier
  const BFamily* base = nullptr;
  bool symbolic = false;
  std::optional<bool> behrend;
  std::vector<std::uint64_t> mods;  // explicit moduli (already scaled)
};

/// Flattens unions and nested scalings into blocks c * A.
inline void flatten(const BFamily& f, std::uint64_t scale, std::optional<bool> flag, std::vector<FlatBlock>& out) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExplicitMods>) {
          FlatBlock b;
          b.scale = scale;
          for (auto m : d.mods) b.mods.push_back(m * scale);
          out.push_back(std::move(b));
        } else if constexpr (std::is_same_v<T, ScaledFamily>) {
          flatten(*d.base, scale * d.c, d.behrend ? d.behrend : flag, out);
        } else if constexpr (std::is_same_v<T, UnionFamily>) {
          for (const auto& p : d.parts) flatten(p, scale, flag, out);
        } else {
          FlatBlock b;
          b.scale = scale;
          b.base = &f;
          b.symbolic = true;
          b.behrend = flag;
          out.push_back(std::move(b));
        }
      },
      f.descriptor());
}

}  // namespace detail

/// Step 0 returns {1} when 1 is in B. Otherwise the smallest c whose quotient
/// {b / c : c | b} contains a block flagged Behrend is chosen, B becomes
/// (B \ cZ) u {c}, and the search repeats until no flagged quotient remains.
inline TautReduction reduce_taut(const BFamily& family, const TautOptions& opts = {}) {
  std::vector<detail::FlatBlock> blocks;
  detail::flatten(family, 1, std::nullopt, blocks);
  for (const auto& b : blocks)
    if (b.symbolic && !b.behrend)
      throw Error(ErrorKind::MissingBehrendFlag, "infinite block without a Behrend flag");

  TautReduction red;
  red.input = family;
  red.truncation = family.is_bounded() ? std::max<std::uint64_t>(1, family.max_bound()) : opts.truncation;

  auto all = family.truncate(red.truncation);
  if (!all.empty() && all.front() == 1) {
    red.output = BFamily::explicit_of({1});
    red.stopped_at = TautStop::Step0;
    return red;
  }

  std::vector<std::uint64_t> chosen;
  auto absorbed = [&](std::uint64_t v) {
    return std::any_of(chosen.begin(), chosen.end(), [&](std::uint64_t c) { return v % c == 0; });
  };
  // a block whose scale is already a multiple of an explicit modulus adds nothing
  std::vector<std::uint64_t> explicit_mods;
  for (const auto& b : blocks)
    if (!b.symbolic) explicit_mods.insert(explicit_mods.end(), b.mods.begin(), b.mods.end());
  auto redundant = [&](std::uint64_t scale) {
    return std::any_of(explicit_mods.begin(), explicit_mods.end(), [&](std::uint64_t m) { return scale % m == 0; });
  };
  for (;;) {
    std::optional<std::uint64_t> c;
    for (const auto& b : blocks)
      if (b.symbolic && *b.behrend && !absorbed(b.scale) && !redundant(b.scale) && (!c || b.scale < *c)) c = b.scale;
    if (!c) break;
    if (chosen.size() == opts.max_steps) {
      red.stopped_at = TautStop::StepInfinity;
      break;
    }
    TautStep step;
    step.c = *c;
    for (const auto& b : blocks) {
      if (b.symbolic) {
        if (!absorbed(b.scale) && !redundant(b.scale) && b.scale % *c == 0) ++step.removed_blocks;
      } else {
        for (auto m : b.mods)
          if (!absorbed(m) && m % *c == 0) step.removed_explicit.push_back(m);
      }
    }
    std::sort(step.removed_explicit.begin(), step.removed_explicit.end());
    step.removed_explicit.erase(std::unique(step.removed_explicit.begin(), step.removed_explicit.end()),
                                step.removed_explicit.end());
    chosen.push_back(*c);
    red.steps.push_back(std::move(step));
  }
  if (red.stopped_at != TautStop::StepInfinity) red.stopped_at = chosen.empty() ? TautStop::Step0 : TautStop::StepN;

  std::vector<std::uint64_t> out;
  for (auto b : all)
    if (!absorbed(b)) out.push_back(b);
  for (auto c : chosen)
    if (c <= red.truncation) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  red.output = BFamily::explicit_of(primitive_reduce_sorted(out));
  return red;
}

struct MirskyComparison {
  double max_abs_gap = 0;
  Block worst_block;
  bool dominated = true;  // eta_output <= eta_input on the window
};

/// Empirical block frequencies of both eta's on [1, window].
inline MirskyComparison verify_mirsky_preserved(const BFamily& input, const BFamily& output, std::uint64_t window,
                                                unsigned block_length, const SieveOptions& opts = {}) {
  if (block_length < 1 || block_length > 24) throw Error(ErrorKind::InvalidArgument, "block length must be in [1, 24]");
  if (window < block_length) throw Error(ErrorKind::InvalidArgument, "window shorter than the block length");
  EtaWindow a = sieve_window(input, 1, window, opts);
  EtaWindow b = sieve_window(output, 1, window, opts);
  MirskyComparison cmp;
  for (std::size_t w = 0; w < a.words.size(); ++w)
    if (b.words[w] & ~a.words[w]) cmp.dominated = false;

  const std::size_t n_codes = std::size_t{1} << block_length;
  std::vector<std::uint64_t> ca(n_codes, 0), cb(n_codes, 0);
  const std::uint64_t positions = window - block_length + 1;
  for (std::uint64_t i = 0; i < positions; ++i) {
    ++ca[a.extract(i, block_length)];
    ++cb[b.extract(i, block_length)];
  }
  std::uint64_t worst = 0;
  for (std::size_t c = 0; c < n_codes; ++c) {
    const double gap = std::abs(static_cast<double>(ca[c]) - static_cast<double>(cb[c])) / static_cast<double>(positions);
    if (gap > cmp.max_abs_gap) cmp.max_abs_gap = gap, worst = c;
  }
  cmp.worst_block = Block::from_code(worst, block_length);
  return cmp;
}

}  // namespace bfree

#endif  // BFREE_TAUT_HPP
