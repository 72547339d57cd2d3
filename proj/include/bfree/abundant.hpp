#ifndef BFREE_ABUNDANT_HPP
#define BFREE_ABUNDANT_HPP

// Aliquot classification, primitive abundant generators and statistics of
// runs of deficient numbers.

#include "bfree/sieve.hpp"

#include <cmath>

namespace bfree {

enum class Aliquot : std::uint8_t { Deficient, Perfect, Abundant };

inline const char* to_string(Aliquot a) {
  switch (a) {
    case Aliquot::Deficient: return "Deficient";
    case Aliquot::Perfect: return "Perfect";
    case Aliquot::Abundant: return "Abundant";
  }
  return "unknown";
}

struct AliquotClass {
  std::uint64_t n = 0;
  std::uint64_t s = 0;  // sum of proper divisors
  Aliquot kind = Aliquot::Deficient;
};

inline Aliquot compare_aliquot(std::uint64_t s, std::uint64_t n) {
  return s > n ? Aliquot::Abundant : (s == n ? Aliquot::Perfect : Aliquot::Deficient);
}

/// sigma(n) from the factorization.
inline std::uint64_t sigma(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sigma(0)");
  std::uint64_t s = 1;
  for (const auto& [p, e] : arith::factorize(n)) {
    std::uint64_t term = 1, pk = 1;
    for (unsigned k = 0; k < e; ++k) term += (pk *= p);
    s *= term;
  }
  return s;
}

inline AliquotClass classify(std::uint64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const std::uint64_t s = sigma(n) - n;
  return {n, s, compare_aliquot(s, n)};
}

/// sigma(n) for n in [lo, lo + len), by adding each divisor pair (d, n/d)
/// with d <= sqrt(n). Chunks are independent.
inline std::vector<std::uint64_t> sigma_range(std::uint64_t lo, std::uint64_t len, Parallelism par = {}) {
  if (lo < 1) throw Error(ErrorKind::InvalidArgument, "range must start at 1 or above");
  std::vector<std::uint64_t> sig(len, 0);
  const std::uint64_t chunk = 1u << 18;
  const std::uint64_t n_chunks = (len + chunk - 1) / chunk;
  parallel_for(n_chunks, par, [&](std::size_t c) {
    const std::uint64_t a = lo + c * chunk;
    const std::uint64_t b = std::min(lo + len, a + chunk);  // exclusive
    for (std::uint64_t d = 1; d * d < b; ++d) {
      // multiples n = d q in [a, b) with q >= d
      std::uint64_t q = std::max(d, (a + d - 1) / d);
      for (std::uint64_t n = d * q; n < b; n += d, ++q) {
        sig[n - lo] += d;
        if (q != d) sig[n - lo] += q;
      }
    }
  });
  return sig;
}

/// Classes of n in [lo, lo + len).
inline std::vector<Aliquot> classify_range(std::uint64_t lo, std::uint64_t len, Parallelism par = {}) {
  auto sig = sigma_range(lo, len, par);
  std::vector<Aliquot> out(len);
  for (std::uint64_t i = 0; i < len; ++i) out[i] = compare_aliquot(sig[i] - (lo + i), lo + i);
  return out;
}

/// Abundant numbers up to `limit` none of whose proper divisors is abundant.
inline BFamily primitive_abundant_generators(std::uint64_t limit, Parallelism par = {}) {
  if (limit < 12) throw Error(ErrorKind::InvalidArgument, "limit must be >= 12");
  auto cls = classify_range(1, limit, par);
  std::vector<bool> covered(limit + 1, false);
  std::vector<std::uint64_t> gens;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (cls[n - 1] != Aliquot::Abundant || covered[n]) continue;
    gens.push_back(n);
    for (std::uint64_t m = 2 * n; m <= limit; m += n) covered[m] = true;
  }
  return BFamily::explicit_of(std::move(gens));
}

/// Fraction of n in [0, limit - L] with n+1, ..., n+L all deficient.
inline Rational deficient_run_density(std::uint64_t limit, std::uint64_t run_length, Parallelism par = {}) {
  if (run_length < 1) throw Error(ErrorKind::InvalidArgument, "run length must be >= 1");
  if (limit < run_length) throw Error(ErrorKind::InvalidArgument, "limit must be >= run length");
  auto cls = classify_range(1, limit, par);
  std::uint64_t count = 0, run = 0;
  // n + L = m runs over [L, limit]; run = consecutive deficient ending at m.
  for (std::uint64_t m = 1; m <= limit; ++m) {
    run = cls[m - 1] == Aliquot::Deficient ? run + 1 : 0;
    if (m >= run_length && run >= run_length) ++count;
  }
  return Rational(BigInt(count), BigInt(limit - run_length + 1));
}

/// eta-style window on [1, limit]: bit set for deficient n.
inline EtaWindow deficient_window(std::uint64_t limit, Parallelism par = {}) {
  if (limit < 1) throw Error(ErrorKind::InvalidArgument, "limit must be >= 1");
  auto cls = classify_range(1, limit, par);
  EtaWindow w;
  w.start = 1;
  w.length = limit;
  w.words.assign((limit + 63) / 64, 0);
  for (std::uint64_t i = 0; i < limit; ++i)
    if (cls[i] == Aliquot::Deficient) w.words[i >> 6] |= 1ull << (i & 63);
  return w;
}

struct AbundantRun {
  std::uint64_t length = 0;
  std::uint64_t first = 0;  // first element of the first longest run
};

/// Longest block of consecutive abundant numbers in [1, limit].
inline AbundantRun longest_abundant_run(std::uint64_t limit, Parallelism par = {}) {
  auto cls = classify_range(1, limit, par);
  AbundantRun best;
  std::uint64_t run = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    run = cls[n - 1] == Aliquot::Abundant ? run + 1 : 0;
    if (run > best.length) best.length = run, best.first = n - run + 1;
  }
  return best;
}

struct CoprimeAbundantOptions {
  std::uint64_t max_nodes = 200'000'000;
};

/// Minimal abundant n coprime to the first k primes, by branch and bound over
/// factorizations into primes >= p_{k+1}.
inline BigInt smallest_abundant_coprime_to(unsigned k, const CoprimeAbundantOptions& opts = {}) {
  // Enough primes for any bound reachable by the greedy start below.
  std::vector<std::uint64_t> primes;
  {
    std::uint64_t limit = 1000;
    for (;;) {
      primes = arith::primes_up_to(limit);
      if (primes.size() > k + 400) break;
      limit *= 2;
    }
  }
  primes.erase(primes.begin(), primes.begin() + k);

  // Greedy start: consecutive primes to the first power until abundant.
  BigInt best = 1, best_sigma = 1;
  for (std::size_t i = 0; best_sigma <= 2 * best; ++i) {
    if (i == primes.size()) throw Error(ErrorKind::BudgetExceeded, "prime table exhausted");
    best *= primes[i];
    best_sigma *= primes[i] + 1;
  }

  // ratio_bound(j, t): product of p/(p-1) over t primes starting at index j
  auto ratio_bound = [&](std::size_t j, std::size_t t) {
    long double r = 1;
    for (std::size_t i = j; i < j + t && i < primes.size(); ++i) {
      const auto p = static_cast<long double>(primes[i]);
      r *= p / (p - 1);
    }
    return r;
  };

  std::uint64_t nodes = 0;
  // n, sigma(n) exact; j = index of the next admissible prime
  auto rec = [&](auto&& self, const BigInt& n, const BigInt& sig, std::size_t j) -> void {
    if (++nodes > opts.max_nodes) throw Error(ErrorKind::BudgetExceeded, "search node budget exhausted");
    if (sig > 2 * n) {
      if (n < best) best = n;
      return;  // any multiple is larger
    }
    const long double ratio = static_cast<long double>(sig.convert_to<long double>() / n.convert_to<long double>());
    for (std::size_t i = j; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (n * p >= best) break;
      // at most t further distinct primes, each >= p
      const long double room = (best.convert_to<long double>()) / (n.convert_to<long double>());
      const auto t = static_cast<std::size_t>(std::floor(std::log(room) / std::log(static_cast<long double>(p)))) + 1;
      if (ratio * ratio_bound(i, t) <= 2.0L - 1e-12L) break;
      BigInt pe = p, sp = 1 + BigInt(p);
      while (n * pe < best) {
        self(self, n * pe, sig * sp, i + 1);
        pe *= p;
        sp += pe;
      }
    }
  };
  rec(rec, BigInt(1), BigInt(1), 0);
  return best;
}

}  // namespace bfree

#endif  // BFREE_ABUNDANT_HPP
