#ifndef BFREE_DYNAMICS_HPP
#define BFREE_DYNAMICS_HPP

// Finite-level odometer points and the maps between them and 0/1 words,
// proximality evidence, rotation periods, Toeplitz skeletons and the
// sampler for the measure of maximal entropy.

#include "bfree/admissibility.hpp"
#include "bfree/progressions.hpp"
#include "bfree/random.hpp"

namespace bfree {

/// A point of prod_{k<=K} Z/b_k Z, g_k in [0, b_k).
class OdometerPoint {
 public:
  OdometerPoint(std::vector<std::uint64_t> mods, std::vector<std::uint64_t> coords)
      : mods_(std::move(mods)), g_(std::move(coords)) {
    if (mods_.empty()) throw Error(ErrorKind::InvalidArgument, "odometer level must be >= 1");
    if (mods_.size() != g_.size()) throw Error(ErrorKind::InvalidArgument, "one coordinate per modulus");
    for (std::size_t k = 0; k < mods_.size(); ++k) {
      if (mods_[k] == 0) throw Error(ErrorKind::InvalidArgument, "modulus 0");
      if (g_[k] >= mods_[k]) throw Error(ErrorKind::InvalidArgument, "coordinate out of range");
    }
  }

  /// The diagonal image of n.
  static OdometerPoint from_integer(const std::vector<std::uint64_t>& mods, std::int64_t n) {
    std::vector<std::uint64_t> g;
    for (auto b : mods) g.push_back(arith::floor_mod(n, b));
    return OdometerPoint(mods, std::move(g));
  }

  /// W: tower coordinates (g mod lcm(b_1..b_k))_k to product coordinates.
  static OdometerPoint from_tower(const std::vector<std::uint64_t>& mods, const std::vector<BigInt>& tower) {
    if (tower.size() != mods.size()) throw Error(ErrorKind::InvalidArgument, "one tower level per modulus");
    std::vector<std::uint64_t> g;
    BigInt l = 1;
    for (std::size_t k = 0; k < mods.size(); ++k) {
      BigInt next = arith::big_lcm(l, BigInt(mods[k]));
      if (tower[k] < 0 || tower[k] >= next) throw Error(ErrorKind::InvalidArgument, "tower level out of range");
      if (k > 0 && tower[k] % l != tower[k - 1])
        throw Error(ErrorKind::InvalidArgument, "tower levels are not compatible");
      g.push_back(static_cast<std::uint64_t>(tower[k] % mods[k]));
      l = next;
    }
    return OdometerPoint(mods, std::move(g));
  }

  std::size_t level() const { return mods_.size(); }
  const std::vector<std::uint64_t>& mods() const { return mods_; }
  const std::vector<std::uint64_t>& coords() const { return g_; }

  /// Membership in the closure of the diagonal: g_i = g_j mod gcd(b_i, b_j).
  bool in_G() const {
    for (std::size_t i = 0; i < g_.size(); ++i)
      for (std::size_t j = i + 1; j < g_.size(); ++j) {
        auto d = std::gcd(mods_[i], mods_[j]);
        if (g_[i] % d != g_[j] % d) return false;
      }
    return true;
  }

  /// Tower form; the point must lie in G.
  std::vector<BigInt> tower() const {
    std::vector<BigInt> out;
    std::optional<Progression> acc = Progression(BigInt(mods_[0]), BigInt(g_[0]));
    out.push_back(acc->offset());
    for (std::size_t k = 1; k < mods_.size(); ++k) {
      acc = detail::merge(*acc, Progression(BigInt(mods_[k]), BigInt(g_[k])));
      if (!acc) throw Error(ErrorKind::InvalidArgument, "point is not in the odometer subgroup");
      out.push_back(acc->offset());
    }
    return out;
  }

  /// T^t: adds t to every coordinate.
  OdometerPoint rotate(std::int64_t t = 1) const {
    std::vector<std::uint64_t> g;
    for (std::size_t k = 0; k < mods_.size(); ++k)
      g.push_back((g_[k] + arith::floor_mod(t, mods_[k])) % mods_[k]);
    return OdometerPoint(mods_, std::move(g));
  }

  friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;

 private:
  std::vector<std::uint64_t> mods_;
  std::vector<std::uint64_t> g_;
};

/// phi(g) on [start, start + length): 1 iff n + g_k is not divisible by b_k for all k.
inline Block phi(const OdometerPoint& g, std::int64_t start, std::size_t length) {
  std::vector<std::uint8_t> bits(length, 1);
  const auto& mods = g.mods();
  for (std::size_t k = 0; k < mods.size(); ++k) {
    const std::uint64_t b = mods[k];
    // first i with start + i + g_k = 0 mod b
    const std::uint64_t r = (arith::floor_mod(start, b) + g.coords()[k]) % b;
    for (std::uint64_t i = r == 0 ? 0 : b - r; i < length; i += b) bits[i] = 0;
  }
  return Block(std::move(bits));
}

struct ThetaResult {
  std::optional<OdometerPoint> point;                  // set when every coordinate is unique
  std::vector<std::vector<std::uint64_t>> candidates;  // per modulus, all admissible g_k
  bool ambiguous() const { return !point.has_value(); }
};

/// Recovers g with supp(y) disjoint from b_k Z - g_k, from a window of y
/// starting at `start`.
inline ThetaResult theta(const Block& block, std::int64_t start, const std::vector<std::uint64_t>& mods) {
  if (mods.empty()) throw Error(ErrorKind::InvalidArgument, "odometer level must be >= 1");
  ThetaResult res;
  std::vector<std::int64_t> supp;
  for (std::size_t i = 0; i < block.size(); ++i)
    if (block[i]) supp.push_back(start + static_cast<std::int64_t>(i));
  bool unique = true;
  std::vector<std::uint64_t> g;
  for (auto b : mods) {
    std::vector<bool> hit(b, false);
    for (auto p : supp) hit[arith::floor_mod(p, b)] = true;
    std::vector<std::uint64_t> cand;
    for (std::uint64_t r = 0; r < b; ++r)
      if (!hit[r]) cand.push_back((b - r) % b);
    if (cand.empty()) throw Error(ErrorKind::NotInY, "support meets every residue class mod " + std::to_string(b));
    std::sort(cand.begin(), cand.end());
    if (cand.size() > 1) unique = false;
    g.push_back(cand.front());
    res.candidates.push_back(std::move(cand));
  }
  if (unique) res.point = OdometerPoint(mods, std::move(g));
  return res;
}

// ---------------------------------------------------------------------------

/// Residues mod lcm(B) that are B-free.
inline std::vector<std::uint64_t> free_residues(const std::vector<std::uint64_t>& mods, const Budget& budget = {}) {
  const std::uint64_t L = mods.empty() ? 1 : lcm_within(mods, budget);
  if (L > budget.max_period_scan) throw Error(ErrorKind::StepOverflowBudget, "period exceeds the scan budget");
  EtaWindow w = sieve_moduli(mods, 0, L);
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < L; ++r)
    if (w.bit(r)) out.push_back(r);
  return out;
}

/// Smallest d such that some class dZ + r lies in F_B; nullopt when F_B is empty.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> max_equicontinuous_class(
    const std::vector<std::uint64_t>& mods, const Budget& budget = {}) {
  const std::uint64_t L = mods.empty() ? 1 : lcm_within(mods, budget);
  if (L > budget.max_period_scan) throw Error(ErrorKind::StepOverflowBudget, "period exceeds the scan budget");
  EtaWindow w = sieve_moduli(mods, 0, L);
  for (auto d : arith::divisors(L)) {
    std::vector<bool> ok(d, true);
    for (std::uint64_t x = 0; x < L; ++x)
      if (!w.bit(x)) ok[x % d] = false;
    for (std::uint64_t r = 0; r < d; ++r)
      if (ok[r]) return std::make_pair(d, r);
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> max_equicontinuous_period(const std::vector<std::uint64_t>& mods,
                                                             const Budget& budget = {}) {
  auto c = max_equicontinuous_class(mods, budget);
  if (!c) return std::nullopt;
  return c->first;
}

/// Least period of eta for a finite family, tested over one full lcm period.
inline std::uint64_t minimal_period(const std::vector<std::uint64_t>& mods, const Budget& budget = {}) {
  const std::uint64_t L = mods.empty() ? 1 : lcm_within(mods, budget);
  if (L > budget.max_period_scan / 2) throw Error(ErrorKind::StepOverflowBudget, "period exceeds the scan budget");
  EtaWindow w = sieve_moduli(mods, 0, 2 * L);
  for (auto d : arith::divisors(L)) {
    bool periodic = true;
    for (std::uint64_t x = 0; x < L && periodic; ++x)
      if (w.bit(x) != w.bit(x + d)) periodic = false;
    if (periodic) return d;
  }
  return L;
}

// ---------------------------------------------------------------------------

enum class Proximality { Proximal, NotProximal, UndecidedAtTruncation };

inline const char* to_string(Proximality p) {
  switch (p) {
    case Proximality::Proximal: return "Proximal";
    case Proximality::NotProximal: return "NotProximal";
    case Proximality::UndecidedAtTruncation: return "UndecidedAtTruncation";
  }
  return "unknown";
}

struct ZeroBlockEvidence {
  std::uint64_t k = 0;
  std::vector<std::uint64_t> crt_moduli;  // pairwise coprime c_0..c_{k-1}
  std::optional<std::uint64_t> crt_solution;  // n = -i mod c_i, smallest n >= 0
  std::optional<std::uint64_t> crt_modulus;
  ZeroBlockScan scan;                     // observed runs on the scan window
};

struct ProximalityOptions {
  std::uint64_t truncation = 100'000;  // moduli considered for infinite families
  std::uint64_t zero_block_k_max = 3;
  std::uint64_t tprox_k_max = 6;
  std::size_t tprox_candidates = 64;   // smallest moduli tried in the T_prox search
  std::int64_t scan_start = 0;
  std::uint64_t scan_length = 10'001;
  Budget budget{};
};

struct ProximalityVerdict {
  std::vector<ZeroBlockEvidence> zero_blocks;            // (d)
  std::uint64_t tprox_max_k = 0;                         // (e) largest k <= k_max with a tuple
  std::vector<std::uint64_t> tprox_tuple;
  std::vector<std::uint64_t> coprime_subset;             // (f) greedy, at the truncation
  bool infinite_coprime_subset = false;                  // (f) structural
  std::optional<std::uint64_t> free_class_modulus;       // (g) lcm(B) for finite B
  std::vector<std::uint64_t> free_classes;               // (g) first free residues mod lcm
  std::size_t free_class_count = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness_ap;  // (d, r) with dZ + r in F_B
  Proximality overall = Proximality::UndecidedAtTruncation;
};

namespace detail {
/// Tuples b_1..b_k with gcd(b_i, b_j) | j - i, extended greedily by backtracking.
inline std::vector<std::uint64_t> tprox_search(const std::vector<std::uint64_t>& cand, std::uint64_t k) {
  std::vector<std::uint64_t> chosen;
  auto rec = [&](auto&& self) -> bool {
    if (chosen.size() == k) return true;
    const std::uint64_t j = chosen.size() + 1;
    for (auto b : cand) {
      bool ok = true;
      for (std::size_t i = 0; i < chosen.size() && ok; ++i)
        if ((j - (i + 1)) % std::gcd(b, chosen[i]) != 0) ok = false;
      if (!ok) continue;
      chosen.push_back(b);
      if (self(self)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!rec(rec)) chosen.clear();
  return chosen;
}
}  // namespace detail

inline ProximalityVerdict proximality_suite(const BFamily& family, const ProximalityOptions& opts = {}) {
  ProximalityVerdict v;
  const bool finite = family.is_finite();
  const auto mods = finite ? family.materialize() : family.truncate(opts.truncation);
  const bool has_one = !mods.empty() && mods.front() == 1;

  // (f)
  v.coprime_subset = extract_coprime_subset(mods).elements;
  v.infinite_coprime_subset = family.has_infinite_coprime_subset();

  // (d) CRT placement of a zero run of length k, plus the observed runs.
  EtaWindow scan = sieve_window(family, opts.scan_start, opts.scan_length);
  for (std::uint64_t k = 1; k <= opts.zero_block_k_max; ++k) {
    ZeroBlockEvidence z;
    z.k = k;
    if (v.coprime_subset.size() >= k) {
      z.crt_moduli.assign(v.coprime_subset.begin(), v.coprime_subset.begin() + static_cast<std::ptrdiff_t>(k));
      std::vector<Progression> sys;
      for (std::uint64_t i = 0; i < k; ++i)
        sys.emplace_back(BigInt(z.crt_moduli[i]), -BigInt(i));
      auto sol = intersect(sys);
      if (sol && arith::bit_length(sol->step()) <= 64) {
        z.crt_solution = sol->offset().convert_to<std::uint64_t>();
        z.crt_modulus = sol->step().convert_to<std::uint64_t>();
      }
    }
    z.scan = zero_block_scan(scan, k);
    v.zero_blocks.push_back(std::move(z));
  }

  // (e)
  std::vector<std::uint64_t> cand(mods.begin(), mods.begin() + static_cast<std::ptrdiff_t>(
                                                    std::min(mods.size(), opts.tprox_candidates)));
  for (std::uint64_t k = 1; k <= opts.tprox_k_max; ++k) {
    auto t = detail::tprox_search(cand, k);
    if (t.empty()) break;
    v.tprox_max_k = k;
    v.tprox_tuple = std::move(t);
  }

  // (g) and the overall verdict.
  if (has_one) {
    v.overall = Proximality::Proximal;  // eta = 0
  } else if (finite) {
    try {
      auto fr = free_residues(mods, opts.budget);
      v.free_class_modulus = mods.empty() ? 1 : lcm_within(mods, opts.budget);
      v.free_class_count = fr.size();
      fr.resize(std::min<std::size_t>(fr.size(), 16));
      v.free_classes = std::move(fr);
      v.witness_ap = max_equicontinuous_class(mods, opts.budget);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepOverflowBudget) throw;
      // 1 is free mod every b > 1, so lcm(B) Z + 1 lies in F_B.
      v.free_classes = {1};
    }
    v.overall = Proximality::NotProximal;
  } else {
    v.overall = v.infinite_coprime_subset ? Proximality::Proximal : Proximality::NotProximal;
  }
  return v;
}

// ---------------------------------------------------------------------------

struct ToeplitzStage {
  Block block;            // B_n over [l, r]
  std::int64_t l = 0, r = 0;
  std::int64_t m = 0;     // anchor
  std::uint64_t d = 1;    // period
  bool verified = false;  // eta[m + k d + l, m + k d + r] = B_n on the window
  std::uint64_t verified_repeats = 0;
};

struct ToeplitzSkeleton {
  std::vector<ToeplitzStage> stages;
  bool degenerate = false;             // the all-zeros Toeplitz point
  bool partial = false;                // stopped before the requested stages
  bool maximality_certified = false;   // the first zero run is globally longest
  std::string stop_reason;
};

struct ToeplitzOptions {
  std::uint64_t window = 1'000'000;  // eta is read on [1, window]
  Budget budget{};
};

namespace detail {

/// lcm of the moduli dividing p (1 if none).
inline std::uint64_t zero_period(const std::vector<std::uint64_t>& mods, std::int64_t p) {
  std::uint64_t l = 1;
  for (auto b : mods) {
    if (arith::floor_mod(p, b) != 0) continue;
    auto n = arith::checked_lcm(l, b);
    if (!n) return 0;
    l = *n;
  }
  return l;
}

struct Occurrence {
  std::int64_t k;
  std::int64_t anchor;
};

/// Anchors m + k d whose block [anchor + l, anchor + r] lies inside [1, N].
inline std::vector<Occurrence> occurrences(std::int64_t m, std::uint64_t d, std::int64_t l, std::int64_t r,
                                           std::int64_t N) {
  std::vector<Occurrence> out;
  const auto dd = static_cast<std::int64_t>(d);
  std::int64_t k = -((m + l - 1) / dd);
  while (m + k * dd + l < 1) ++k;
  for (; m + k * dd + r <= N; ++k) out.push_back({k, m + k * dd});
  return out;
}

}  // namespace detail

/// Inductive Toeplitz skeleton: longest zero run, then rounds of
/// right ones (shortest), left ones (shortest), right zeros (longest),
/// left zeros (longest). Periods grow by the lcm of moduli dividing the new zeros.
inline ToeplitzSkeleton build_minimal_toeplitz(const BFamily& family, std::size_t stages,
                                               const ToeplitzOptions& opts = {}) {
  if (stages < 1) throw Error(ErrorKind::InvalidArgument, "stages must be >= 1");
  ToeplitzSkeleton sk;
  const auto N = static_cast<std::int64_t>(opts.window);
  const auto mods = family.is_finite() ? family.materialize() : family.truncate(opts.window);
  if (family.has_infinite_coprime_subset() || (!mods.empty() && mods.front() == 1)) {
    sk.degenerate = true;
    sk.maximality_certified = true;
    ToeplitzStage st;
    st.block = Block::from_string("0");
    st.verified = true;
    sk.stages.push_back(std::move(st));
    return sk;
  }
  EtaWindow eta = sieve_window(family, 1, opts.window);
  auto at = [&](std::int64_t p) { return eta.at(p); };

  // Stage 1: longest zero run inside the window.
  std::int64_t best_s = 0, best_len = 0, run = 0;
  for (std::int64_t p = 1; p <= N; ++p) {
    run = at(p) ? 0 : run + 1;
    if (run > best_len) best_len = run, best_s = p - run + 1;
  }
  if (best_len == 0) {
    sk.stop_reason = "no zero on the window";
    sk.partial = true;
    return sk;
  }
  if (family.is_finite()) {
    try {
      const std::uint64_t L = mods.empty() ? 1 : lcm_within(mods, opts.budget);
      sk.maximality_certified = L + static_cast<std::uint64_t>(best_len) < opts.window;
    } catch (const Error&) {
    }
  }

  ToeplitzStage cur;
  cur.l = 0;
  cur.r = best_len - 1;
  cur.m = best_s;
  cur.d = 1;
  for (std::int64_t p = best_s; p < best_s + best_len; ++p) {
    auto z = detail::zero_period(mods, p);
    auto n = z ? arith::checked_lcm(cur.d, z) : std::nullopt;
    if (!n) {
      sk.partial = true;
      sk.stop_reason = "period overflow";
      return sk;
    }
    cur.d = *n;
  }

  auto snapshot = [&](ToeplitzStage st) {
    std::vector<std::uint8_t> bits;
    for (std::int64_t i = st.l; i <= st.r; ++i) bits.push_back(at(st.m + i));
    st.block = Block(std::move(bits));
    st.verified = true;
    st.verified_repeats = 0;
    for (const auto& o : detail::occurrences(st.m, st.d, st.l, st.r, N)) {
      ++st.verified_repeats;
      for (std::int64_t i = st.l; i <= st.r && st.verified; ++i)
        if (at(o.anchor + i) != static_cast<bool>(st.block[static_cast<std::size_t>(i - st.l)]))
          st.verified = false;
    }
    sk.stages.push_back(std::move(st));
  };
  snapshot(cur);

  // Runs of `symbol` going right from `from` (dir = +1) or left (dir = -1);
  // nullopt when the run reaches the window edge.
  auto run_len = [&](std::int64_t from, int dir, bool symbol) -> std::optional<std::int64_t> {
    std::int64_t n = 0;
    for (std::int64_t p = from;; p += dir, ++n) {
      if (p < 1 || p > N) return std::nullopt;
      if (at(p) != symbol) return n;
    }
  };

  for (std::size_t phase = 0; sk.stages.size() < stages; phase = (phase + 1) % 4) {
    const bool ones = phase < 2;
    const int dir = phase % 2 == 0 ? 1 : -1;
    auto occ = detail::occurrences(cur.m, cur.d, cur.l, cur.r, N);
    std::optional<std::int64_t> pick;
    std::int64_t pick_anchor = 0;
    for (const auto& o : occ) {
      const std::int64_t from = dir > 0 ? o.anchor + cur.r + 1 : o.anchor + cur.l - 1;
      auto len = run_len(from, dir, ones);
      if (!len) continue;
      if (ones && *len == 0) continue;
      if (!pick || (ones ? *len < *pick : *len > *pick)) pick = *len, pick_anchor = o.anchor;
    }
    if (!pick) {
      sk.partial = true;
      sk.stop_reason = "no complete occurrence inside the window";
      break;
    }
    ToeplitzStage next = cur;
    next.m = pick_anchor;
    if (dir > 0) next.r += *pick;
    else next.l -= *pick;
    if (!ones) {
      const std::int64_t lo = dir > 0 ? cur.r + 1 : next.l;
      const std::int64_t hi = dir > 0 ? next.r : cur.l - 1;
      for (std::int64_t i = lo; i <= hi; ++i) {
        auto z = detail::zero_period(mods, next.m + i);
        auto n = z ? arith::checked_lcm(next.d, z) : std::nullopt;
        if (!n) {
          sk.partial = true;
          sk.stop_reason = "period overflow";
          return sk;
        }
        next.d = *n;
      }
    }
    cur = next;
    snapshot(cur);
    if (detail::occurrences(cur.m, cur.d, cur.l, cur.r, N).size() < 2) {
      if (sk.stages.size() < stages) {
        sk.partial = true;
        sk.stop_reason = "period exceeds the window";
      }
      break;
    }
  }
  return sk;
}

/// Checks d_n | d_{n+1}, d_n | m_{n+1} - m_n and the window verification.
inline bool skeleton_consistent(const ToeplitzSkeleton& sk) {
  for (std::size_t i = 0; i < sk.stages.size(); ++i) {
    const auto& s = sk.stages[i];
    if (!s.verified) return false;
    if (i + 1 < sk.stages.size()) {
      const auto& t = sk.stages[i + 1];
      if (t.d % s.d != 0) return false;
      if ((t.m - s.m) % static_cast<std::int64_t>(s.d) != 0) return false;
      if (t.l > s.l || t.r < s.r) return false;
    }
  }
  return true;
}

struct ToeplitzVerifyOptions {
  std::optional<std::map<std::uint64_t, unsigned>> d_max;  // factorization; default lcm of the truncation
  std::uint64_t min_repeats = 4;  // a period must repeat this often inside the window
  std::size_t max_counterexamples = 100;
  SieveOptions sieve{};
};

struct ToeplitzReport {
  double fraction_periodic = 0;
  std::uint64_t certified = 0;
  std::uint64_t length = 0;
  std::vector<std::int64_t> counterexamples;  // positions without a period
  std::vector<std::uint64_t> period;          // smallest certified period per position (0 = none)
};

/// For every n in the window, the smallest d | D_max (d <= length / min_repeats)
/// such that n + dZ is constant for the truncated family:
///   eta(n) = 1: gcd(b, d) does not divide n for every b (no multiple of b in n + dZ);
///   eta(n) = 0: some b divides both n and d.
inline ToeplitzReport toeplitz_verify(const BFamily& family, std::int64_t start, std::uint64_t length,
                                      const ToeplitzVerifyOptions& opts = {}) {
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "window length must be >= 1");
  EtaWindow eta = sieve_window(family, start, length, opts.sieve);
  const auto& mods = eta.moduli;
  std::map<std::uint64_t, unsigned> fact = opts.d_max ? *opts.d_max : arith::lcm_factorization(mods);
  const std::uint64_t cap = std::max<std::uint64_t>(1, length / std::max<std::uint64_t>(1, opts.min_repeats));
  ToeplitzReport rep;
  rep.length = length;
  rep.period.assign(length, 0);
  const bool all_zero = !mods.empty() && mods.front() == 1;

  auto first_multiple = [&](std::uint64_t g) {  // first index i with g | start + i
    const std::uint64_t r = arith::floor_mod(start, g);
    return r == 0 ? 0 : g - r;
  };
  std::vector<std::uint8_t> bad(length);
  for (auto d : arith::divisors_up_to(fact, cap)) {
    // zeros: multiples of some b | d
    for (auto b : mods) {
      if (d % b != 0) continue;
      for (std::uint64_t i = first_multiple(b); i < length; i += b)
        if (!rep.period[i]) rep.period[i] = d;
    }
    // ones: every b must share a factor g with d, and n avoids gZ
    if (all_zero) continue;
    bool possible = true;
    for (auto b : mods)
      if (std::gcd(b, d) == 1) possible = false;
    if (!possible) continue;
    std::fill(bad.begin(), bad.end(), 0);
    for (auto b : mods) {
      const auto g = std::gcd(b, d);
      for (std::uint64_t i = first_multiple(g); i < length; i += g) bad[i] = 1;
    }
    for (std::uint64_t i = 0; i < length; ++i)
      if (!rep.period[i] && !bad[i] && eta.bit(i)) rep.period[i] = d;
  }
  for (std::uint64_t i = 0; i < length; ++i) {
    if (rep.period[i]) ++rep.certified;
    else if (rep.counterexamples.size() < opts.max_counterexamples)
      rep.counterexamples.push_back(start + static_cast<std::int64_t>(i));
  }
  rep.fraction_periodic = static_cast<double>(rep.certified) / static_cast<double>(length);
  return rep;
}

/// For B = {b_i 2^i : i <= K}: the period prod_{i <= min(a, K)} b_i * 2^(a+1)
/// of a free position n = m 2^a, m odd.
inline std::uint64_t dyadic_period(const std::vector<std::uint64_t>& odd_factors, std::int64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "0 has no dyadic valuation");
  const auto a = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(n < 0 ? -n : n)));
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < odd_factors.size() && i < a; ++i) p *= odd_factors[i];
  return p << (a + 1);
}

struct DyadicCertificate {
  std::uint64_t ones = 0;
  std::uint64_t certified = 0;
  std::vector<std::int64_t> failures;
};

/// Point evaluation of eta(n + j P(n)) = 1 for |j| <= repeats at every free n.
inline DyadicCertificate certify_dyadic_periods(const std::vector<std::uint64_t>& odd_factors, std::int64_t start,
                                                std::uint64_t length, std::int64_t repeats = 4) {
  std::vector<std::uint64_t> mods;
  for (std::size_t i = 0; i < odd_factors.size(); ++i) mods.push_back(odd_factors[i] << (i + 1));
  std::sort(mods.begin(), mods.end());
  DyadicCertificate c;
  for (std::uint64_t i = 0; i < length; ++i) {
    const std::int64_t n = start + static_cast<std::int64_t>(i);
    if (n == 0 || !is_free(mods, n)) continue;
    ++c.ones;
    const auto P = static_cast<std::int64_t>(dyadic_period(odd_factors, n));
    bool ok = true;
    for (std::int64_t j = -repeats; j <= repeats && ok; ++j) ok = is_free(mods, n + j * P);
    if (ok) ++c.certified;
    else c.failures.push_back(n);
  }
  return c;
}

// ---------------------------------------------------------------------------

/// eta AND fair coins on [start, start + length); coin word w covers bits 64w..64w+63.
inline EtaWindow sample_max_entropy(const BFamily& family, std::int64_t start, std::uint64_t length,
                                    std::uint64_t seed, const SieveOptions& opts = {}) {
  EtaWindow w = sieve_window(family, start, length, opts);
  SplitMix64 rng(seed);
  for (auto& word : w.words) word &= rng.next();
  return w;
}

}  // namespace bfree

#endif  // BFREE_DYNAMICS_HPP
