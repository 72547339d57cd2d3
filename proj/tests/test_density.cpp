#include "bfree/density.hpp"
#include "bfree/random.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace bfree;

namespace {

Rational q(long a, long b) { return Rational(BigInt(a), BigInt(b)); }

/// 1 - prod (1 - 1/f(p)) over primes p with f(p) <= K, in long double.
long double multiples_product(std::uint64_t K, bool squares) {
  long double prod = 1;
  for (std::uint64_t p = 2; (squares ? p * p : p) <= K; ++p)
    if (oracle::is_prime(p)) prod *= 1.0L - 1.0L / static_cast<long double>(squares ? p * p : p);
  return 1 - prod;
}

DensityOptions small_window() {
  DensityOptions o;
  o.sample_window = 100'000;
  return o;
}

}  // namespace

TEST(Density, ExactExamples) {
  EXPECT_EQ(exact_density(std::vector<std::uint64_t>{4, 6}), q(1, 3));
  EXPECT_EQ(exact_density(std::vector<std::uint64_t>{2, 3}), q(2, 3));
  EXPECT_EQ(exact_density(std::vector<std::uint64_t>{1}), Rational(1));
  EXPECT_EQ(exact_density(BFamily::explicit_of({6, 20, 56})), oracle::density({6, 20, 56}));
}

TEST(Density, ExactRespectsBudget) {
  EXPECT_BFREE_ERROR(exact_density(BFamily::primes(100)), ErrorKind::StepOverflowBudget);
}

TEST(Density, CoprimeProductMatchesResidueCount) {
  std::vector<std::uint64_t> m{4, 9, 25, 49};
  EXPECT_EQ(coprime_density(m), oracle::density(m));
  EXPECT_TRUE(pairwise_coprime(m));
  EXPECT_FALSE(pairwise_coprime({4, 6}));
}

TEST(Density, SquaresTruncations) {
  auto rep = davenport_erdos(BFamily::squares_of_primes(), {100, 1000, 10000}, small_window());
  ASSERT_EQ(rep.de_sequence.size(), 3u);
  EXPECT_EQ(rep.de_sequence[0].value, q(457, 1225));  // 4, 9, 25, 49
  EXPECT_EQ(rep.de_sequence[0].value, oracle::density({4, 9, 25, 49}));
  for (const auto& e : rep.de_sequence)
    EXPECT_NEAR(to_double(e.value), static_cast<double>(multiples_product(e.K, true)), 1e-12);
  EXPECT_NEAR(to_double(rep.delta_estimate), 0.3909663, 1e-7);
  EXPECT_EQ(rep.delta_estimate, rep.de_sequence.back().value);
  EXPECT_FALSE(rep.exact_density_M);
  EXPECT_FALSE(rep.flags.behrend_diagnostic);
  EXPECT_TRUE(rep.flags.thin);
}

TEST(Density, FiniteFamilyIsConstant) {
  auto rep = davenport_erdos(BFamily::explicit_of({2, 3}), {3, 10, 100, 1000}, small_window());
  for (const auto& e : rep.de_sequence) EXPECT_EQ(e.value, q(2, 3));
  ASSERT_TRUE(rep.exact_density_M);
  EXPECT_EQ(*rep.exact_density_M, q(2, 3));
}

TEST(Density, PrimesApproachOne) {
  auto rep = davenport_erdos(BFamily::primes(), {10, 1000, 100000}, small_window());
  for (const auto& e : rep.de_sequence)
    EXPECT_NEAR(to_double(e.value), static_cast<double>(multiples_product(e.K, false)), 1e-12);
  EXPECT_EQ(rep.de_sequence.back().method, DensityMethod::CoprimeProduct);
  // 1 - prod_{p <= 1e5}(1 - 1/p) ~ 0.9512: the 1e-3 diagnostic stays silent
  EXPECT_NEAR(to_double(rep.delta_estimate), 0.951247, 1e-6);
  EXPECT_FALSE(rep.flags.behrend_diagnostic);
  DensityOptions loose = small_window();
  loose.behrend_threshold = 0.05;
  EXPECT_TRUE(davenport_erdos(BFamily::primes(), {100000}, loose).flags.behrend_diagnostic);
  EXPECT_FALSE(rep.flags.thin);
}

TEST(Density, SampledFallbackIsMarked) {
  // neither within the lcm budget nor pairwise coprime
  auto f = BFamily::union_of({BFamily::explicit_of({6}), BFamily::primes()});
  DensityOptions o = small_window();
  auto rep = davenport_erdos(f, {200}, o);
  EXPECT_EQ(rep.de_sequence[0].method, DensityMethod::Sampled);
}

TEST(Density, DiagnosticsShape) {
  auto rep = davenport_erdos(BFamily::squares_of_primes(), {10, 100}, small_window());
  ASSERT_EQ(rep.log_partial_sums.size(), 5u);  // N = 10 .. 1e5
  EXPECT_EQ(rep.log_partial_sums.back().first, 100'000u);
  ASSERT_EQ(rep.flags.light_tails_estimate.size(), 2u);
  for (const auto& t : rep.flags.light_tails_estimate) EXPECT_LE(t.sampled, t.union_bound + 1e-12);
  for (const auto& [K, v] : rep.flags.besicovitch_diagnostic) EXPECT_GE(v, 0.0);
  EXPECT_GE(rep.flags.besicovitch_diagnostic[0].second, rep.flags.besicovitch_diagnostic[1].second);
}

TEST(Density, TautExamples) {
  auto v = taut_check_finite({4, 6});
  EXPECT_TRUE(v.is_taut);
  ASSERT_EQ(v.witnesses.size(), 2u);
  EXPECT_EQ(v.witnesses[0].with_b, q(1, 3));
  EXPECT_EQ(v.witnesses[0].without_b, q(1, 6));  // dropping 4 leaves {6}
  EXPECT_EQ(v.witnesses[1].without_b, q(1, 4));  // dropping 6 leaves {4}
  auto two = taut_check_finite({2});
  EXPECT_TRUE(two.is_taut);
  EXPECT_EQ(two.witnesses[0].with_b, q(1, 2));
  EXPECT_EQ(two.witnesses[0].without_b, Rational(0));
  EXPECT_BFREE_ERROR(taut_check_finite({2, 4}), ErrorKind::NotPrimitive);
}

TEST(DensityProperty, SingleModulus) {
  for (std::uint64_t b = 1; b <= 300; ++b) ASSERT_EQ(exact_density(std::vector<std::uint64_t>{b}), q(1, b));
}

TEST(DensityProperty, InclusionExclusionAgrees) {
  SplitMix64 rng(401);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint64_t> v;
    const auto k = rng.uniform(1, 6);
    for (std::uint64_t i = 0; i < k; ++i) v.push_back(rng.uniform(1, 40));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const auto d = exact_density(v);
    ASSERT_EQ(d, oracle::inclusion_exclusion(v));
    ASSERT_GE(d, Rational(0));
    ASSERT_LE(d, Rational(1));
  }
}

TEST(DensityProperty, SequenceNondecreasing) {
  SplitMix64 rng(402);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::uint64_t> v;
    const auto k = rng.uniform(1, 10);
    for (std::uint64_t i = 0; i < k; ++i) v.push_back(rng.uniform(2, 60));
    std::vector<std::uint64_t> grid{rng.uniform(1, 20), rng.uniform(20, 40), rng.uniform(40, 80)};
    DensityOptions o;
    o.sample_window = 1000;
    auto rep = davenport_erdos(BFamily::explicit_of(v), grid, o);
    for (std::size_t i = 1; i < rep.de_sequence.size(); ++i)
      ASSERT_LE(rep.de_sequence[i - 1].value, rep.de_sequence[i].value);
  }
}

TEST(DensityProperty, RandomPrimitiveFamiliesAreTaut) {
  SplitMix64 rng(403);
  Budget budget;
  budget.max_period_scan = 1u << 22;
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint64_t> v;
    const auto k = rng.uniform(1, 8);
    for (std::uint64_t i = 0; i < k; ++i) v.push_back(rng.uniform(2, 50));
    std::sort(v.begin(), v.end());
    v = primitive_reduce_sorted(std::vector<std::uint64_t>(v.begin(), std::unique(v.begin(), v.end())));
    try {
      ASSERT_TRUE(taut_check_finite(v, budget).is_taut);
      ++checked;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::StepOverflowBudget);
    }
  }
  EXPECT_GT(checked, 250);
}
