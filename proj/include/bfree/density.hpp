#ifndef BFREE_DENSITY_HPP
#define BFREE_DENSITY_HPP

// Exact densities of sets of multiples of finite families, truncation
// sequences converging to the logarithmic density, classification
// diagnostics and the finite tautness check.

#include "bfree/sieve.hpp"

#include <cmath>
#include <set>

namespace bfree {

/// d(M_B) for a finite list of moduli by marking residues modulo lcm(B).
inline Rational exact_density(const std::vector<std::uint64_t>& mods, const Budget& budget = {}) {
  if (mods.empty()) return Rational(0);
  if (std::find(mods.begin(), mods.end(), 1) != mods.end()) return Rational(1);
  const std::uint64_t period = lcm_within(mods, budget);
  if (period > budget.max_period_scan)
    throw Error(ErrorKind::StepOverflowBudget, "period " + std::to_string(period) + " exceeds the scan budget");
  std::vector<bool> hit(period, false);
  for (auto b : mods)
    for (std::uint64_t r = 0; r < period; r += b) hit[r] = true;
  const auto marked = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), true));
  return Rational(BigInt(marked), BigInt(period));
}

inline Rational exact_density(const BFamily& family, const Budget& budget = {}) {
  return exact_density(family.materialize(), budget);
}

/// True when no prime divides two of the moduli.
inline bool pairwise_coprime(const std::vector<std::uint64_t>& mods) {
  std::set<std::uint64_t> seen;
  for (auto b : mods)
    for (const auto& [p, e] : arith::factorize(b))
      if (!seen.insert(p).second) return false;
  return true;
}

namespace detail {
inline BigInt product_tree(const std::vector<BigInt>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 1;
  if (hi - lo == 1) return v[lo];
  std::size_t mid = (lo + hi) / 2;
  return product_tree(v, lo, mid) * product_tree(v, mid, hi);
}
}  // namespace detail

/// d(M_B) = 1 - prod(1 - 1/b) for pairwise coprime B (CRT independence).
inline Rational coprime_density(const std::vector<std::uint64_t>& mods) {
  std::vector<BigInt> num, den;
  for (auto b : mods) {
    num.emplace_back(b - 1);
    den.emplace_back(b);
  }
  Rational free_part(detail::product_tree(num, 0, num.size()), detail::product_tree(den, 0, den.size()));
  return Rational(1) - free_part;
}

enum class DensityMethod { ResidueMarking, CoprimeProduct, Sampled };

inline const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::ResidueMarking: return "residue_marking";
    case DensityMethod::CoprimeProduct: return "coprime_product";
    case DensityMethod::Sampled: return "sampled";
  }
  return "unknown";
}

struct TruncationDensity {
  std::uint64_t K = 0;
  std::size_t moduli = 0;
  Rational value;
  DensityMethod method = DensityMethod::ResidueMarking;
};

struct DensityOptions {
  Budget budget{};
  std::uint64_t sample_window = 1'000'000;  // [1, N] for sampled values and diagnostics
  double thin_increment_tolerance = 0.05;
  double behrend_threshold = 1e-3;
  SieveOptions sieve{};
};

/// d(M_{mods}) exactly when possible, otherwise the fraction of [1, N] hit.
inline TruncationDensity truncation_density(const std::vector<std::uint64_t>& mods, std::uint64_t K,
                                            const DensityOptions& opts) {
  TruncationDensity t;
  t.K = K;
  t.moduli = mods.size();
  try {
    t.value = exact_density(mods, opts.budget);
    t.method = DensityMethod::ResidueMarking;
    return t;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::StepOverflowBudget) throw;
  }
  if (pairwise_coprime(mods)) {
    t.value = coprime_density(mods);
    t.method = DensityMethod::CoprimeProduct;
    return t;
  }
  const std::uint64_t N = opts.sample_window;
  EtaWindow w = sieve_moduli(mods, 1, N, opts.sieve);
  t.value = Rational(BigInt(N - w.count_ones()), BigInt(N));
  t.method = DensityMethod::Sampled;
  return t;
}

struct LightTailEstimate {
  std::uint64_t K = 0;
  double union_bound = 0;   // sum of 1/b over K < b <= N
  double sampled = 0;       // fraction of [1, N] in the union of bZ, b > K
};

struct DensityFlags {
  bool thin = false;
  std::vector<std::pair<std::uint64_t, double>> reciprocal_sums;  // (K, sum_{b<=K} 1/b)
  std::vector<LightTailEstimate> light_tails_estimate;
  std::vector<std::pair<std::uint64_t, double>> besicovitch_diagnostic;  // (K, d(M_B \ M_{B<=K}) on [1,N])
  bool behrend_diagnostic = false;
};

struct DensityReport {
  std::optional<Rational> exact_density_M;
  std::vector<TruncationDensity> de_sequence;
  Rational delta_estimate;
  std::vector<std::pair<std::uint64_t, double>> log_partial_sums;  // (N, (1/log N) sum_{a<=N, a in M} 1/a)
  DensityFlags flags;
};

/// Truncation sequence d(M_{B<=K}) over the grid, with diagnostics on [1, N].
inline DensityReport davenport_erdos(const BFamily& family, std::vector<std::uint64_t> k_grid,
                                     const DensityOptions& opts = {}) {
  if (k_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty K grid");
  std::sort(k_grid.begin(), k_grid.end());
  k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());

  DensityReport rep;
  for (auto K : k_grid) rep.de_sequence.push_back(truncation_density(family.truncate(K), K, opts));
  for (std::size_t i = 1; i < rep.de_sequence.size(); ++i)
    if (rep.de_sequence[i].value < rep.de_sequence[i - 1].value)
      throw std::logic_error("truncation densities must be nondecreasing in K");
  rep.delta_estimate = rep.de_sequence.back().value;

  if (family.is_finite()) {
    try {
      rep.exact_density_M = exact_density(family.materialize(), opts.budget);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepOverflowBudget) throw;
      auto mods = family.materialize();
      if (pairwise_coprime(mods)) rep.exact_density_M = coprime_density(mods);
    }
  }

  // Diagnostics on the window [1, N]; the truncation at N is exact there.
  const std::uint64_t N = opts.sample_window;
  const auto all = family.truncate(N);
  EtaWindow eta = sieve_moduli(all, 1, N, opts.sieve);
  {
    double acc = 0;
    std::uint64_t next = 10;
    for (std::uint64_t a = 1; a <= N; ++a) {
      if (!eta.bit(a - 1)) acc += 1.0 / static_cast<double>(a);
      if (a == next) {
        rep.log_partial_sums.emplace_back(a, acc / std::log(static_cast<double>(a)));
        if (next > N / 10) break;
        next *= 10;
      }
    }
  }

  double recip = 0;
  std::size_t idx = 0;
  for (auto K : k_grid) {
    for (; idx < all.size() && all[idx] <= K; ++idx) recip += 1.0 / static_cast<double>(all[idx]);
    rep.flags.reciprocal_sums.emplace_back(K, recip);
  }
  if (family.is_finite()) {
    rep.flags.thin = true;
  } else if (rep.flags.reciprocal_sums.size() >= 2) {
    const auto n = rep.flags.reciprocal_sums.size();
    rep.flags.thin = rep.flags.reciprocal_sums[n - 1].second - rep.flags.reciprocal_sums[n - 2].second <
                     opts.thin_increment_tolerance;
  }

  for (auto K : k_grid) {
    if (K >= N) break;
    std::vector<std::uint64_t> head, tail;
    double bound = 0;
    for (auto b : all) {
      if (b <= K) head.push_back(b);
      else {
        tail.push_back(b);
        bound += 1.0 / static_cast<double>(b);
      }
    }
    EtaWindow tail_free = sieve_moduli(tail, 1, N, opts.sieve);
    EtaWindow head_free = sieve_moduli(head, 1, N, opts.sieve);
    std::uint64_t only_tail = 0;  // in M_B but not in M_{B<=K}
    for (std::size_t w = 0; w < eta.words.size(); ++w)
      only_tail += static_cast<std::uint64_t>(std::popcount(~eta.words[w] & head_free.words[w]));
    // ~eta has garbage above N only in the final word; head_free is zero there.
    const double dn = static_cast<double>(N);
    rep.flags.light_tails_estimate.push_back(
        {K, bound, static_cast<double>(N - tail_free.count_ones()) / dn});
    rep.flags.besicovitch_diagnostic.emplace_back(K, static_cast<double>(only_tail) / dn);
  }

  rep.flags.behrend_diagnostic = arith::to_double(rep.delta_estimate) > 1.0 - opts.behrend_threshold;
  return rep;
}

struct TautWitness {
  std::uint64_t b = 0;
  Rational with_b;     // delta(M_B)
  Rational without_b;  // delta(M_{B \ {b}})
};

struct TautVerdict {
  bool is_taut = false;
  std::vector<TautWitness> witnesses;
};

/// Exact tautness of a finite primitive family.
inline TautVerdict taut_check_finite(const std::vector<std::uint64_t>& mods, const Budget& budget = {}) {
  for (std::size_t i = 0; i < mods.size(); ++i)
    for (std::size_t j = 0; j < mods.size(); ++j)
      if (i != j && mods[j] % mods[i] == 0)
        throw Error(ErrorKind::NotPrimitive,
                    std::to_string(mods[i]) + " divides " + std::to_string(mods[j]));
  TautVerdict v;
  v.is_taut = true;
  const Rational full = exact_density(mods, budget);
  for (std::size_t i = 0; i < mods.size(); ++i) {
    std::vector<std::uint64_t> rest;
    for (std::size_t j = 0; j < mods.size(); ++j)
      if (j != i) rest.push_back(mods[j]);
    TautWitness w{mods[i], full, exact_density(rest, budget)};
    if (!(w.with_b > w.without_b)) v.is_taut = false;
    v.witnesses.push_back(std::move(w));
  }
  return v;
}

}  // namespace bfree

#endif  // BFREE_DENSITY_HPP
