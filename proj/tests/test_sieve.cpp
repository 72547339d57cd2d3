#include "bfree/density.hpp"
#include "bfree/random.hpp"
#include "bfree/sieve.hpp"
#include "oracles.hpp"

#include <sstream>

using namespace bfree;

namespace {

std::vector<std::uint64_t> random_family(SplitMix64& rng, std::uint64_t max_k, std::uint64_t max_mod) {
  std::vector<std::uint64_t> v;
  const auto k = rng.uniform(1, max_k);
  for (std::uint64_t i = 0; i < k; ++i) v.push_back(rng.uniform(2, max_mod));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

TEST(Sieve, WindowExamples) {
  EXPECT_EQ(sieve_window(BFamily::explicit_of({2}), 0, 6).to_string(), "010101");
  EXPECT_EQ(sieve_window(BFamily::explicit_of({4, 6}), 1, 12).to_string(), "111010101110");
  EXPECT_EQ(sieve_window(BFamily::primes(100), -3, 7).to_string(), "0010100");
  EXPECT_EQ(sieve_window(BFamily::explicit_of({1}), -5, 10).count_ones(), 0u);
  EXPECT_BFREE_ERROR(sieve_window(BFamily::explicit_of({2}), 0, 0), ErrorKind::InvalidArgument);
}

TEST(Sieve, ZeroIsMarkedForSymbolicFamilies) {
  auto w = sieve_window(BFamily::squares_of_primes(), 0, 4);
  EXPECT_EQ(w.to_string(), "0111");
}

TEST(Sieve, RawRoundTrip) {
  auto w = sieve_window(BFamily::explicit_of({4, 6, 9}), -70, 203);
  std::stringstream ss;
  write_raw(ss, w);
  EXPECT_EQ(ss.str().size(), 16u + (203 + 7) / 8);
  auto r = read_raw(ss);
  EXPECT_EQ(r.start, -70);
  EXPECT_EQ(r.length, 203u);
  EXPECT_EQ(r.to_string(), w.to_string());
  std::stringstream bad("short");
  EXPECT_BFREE_ERROR(read_raw(bad), ErrorKind::ParseError);
}

TEST(Sieve, GapExamples) {
  auto two = gap_statistics(sieve_window(BFamily::explicit_of({2}), 0, 10), 0);
  EXPECT_EQ(two.positions, (std::vector<std::int64_t>{1, 3, 5, 7, 9}));
  EXPECT_TRUE(std::all_of(two.gaps.begin(), two.gaps.end(), [](auto g) { return g == 2; }));
  EXPECT_EQ(two.min_window_gaps[0], 2u);

  // {4,6} on [1,25): free 1 2 3 5 7 9 10 11 13 14 15 17 19 21 22 23
  auto f46 = gap_statistics(sieve_window(BFamily::explicit_of({4, 6}), 1, 24), 1);
  std::vector<std::uint64_t> gaps;
  std::int64_t prev = 0;
  for (std::int64_t n = 1; n < 25; ++n)
    if (oracle::is_free({4, 6}, n)) {
      if (prev) gaps.push_back(static_cast<std::uint64_t>(n - prev));
      prev = n;
    }
  EXPECT_EQ(f46.gaps, gaps);
  std::uint64_t best1 = 0;
  for (std::size_t j = 0; j + 1 < gaps.size(); ++j) best1 = std::max(best1, std::min(gaps[j], gaps[j + 1]));
  EXPECT_EQ(f46.min_window_gaps[1], best1);
  EXPECT_EQ(f46.min_window_gaps[1], 2u);

  EXPECT_BFREE_ERROR(gap_statistics(sieve_window(BFamily::explicit_of({2}), 0, 4), 3),
                     ErrorKind::InsufficientFreePositions);
}

TEST(Sieve, ZeroBlockExamples) {
  auto a = zero_block_scan(sieve_window(BFamily::explicit_of({2, 3}), 0, 60), 2);
  EXPECT_TRUE(a.found);
  EXPECT_LE(a.max_gap_between_occurrences, 6u);
  EXPECT_FALSE(zero_block_scan(sieve_window(BFamily::explicit_of({2}), -50, 500), 2).found);
  auto c = zero_block_scan(sieve_window(BFamily::explicit_of({2, 3, 5}), 0, 900), 3);
  EXPECT_TRUE(c.found);
  EXPECT_LE(c.max_gap_between_occurrences, 30u);
  EXPECT_BFREE_ERROR(zero_block_scan(sieve_window(BFamily::explicit_of({2}), 0, 4), 0), ErrorKind::InvalidArgument);
}

TEST(Sieve, BlockFrequencyExamples) {
  auto f = block_frequencies(BFamily::explicit_of({2, 3}), 1, {{1, 600}});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1].block.to_string(), "1");
  ASSERT_TRUE(f[1].exact);
  EXPECT_EQ(*f[1].exact, Rational(BigInt(1), BigInt(3)));
  EXPECT_EQ(f[1].frequency, Rational(BigInt(1), BigInt(3)));

  for (const auto& e : block_frequencies(BFamily::explicit_of({1}), 1, {{1, 100}})) {
    if (e.block.to_string() == "1") EXPECT_EQ(e.frequency, Rational(0));
  }

  // squarefree on [1, 10^7): compare with the exact truncated product
  auto sq = BFamily::squares_of_primes(97);
  auto g = block_frequencies(sq, 1, {{1, 10'000'000 - 1}});
  const double emp = to_double(g.back().frequency);
  EXPECT_NEAR(emp, 1 - to_double(coprime_density(sq.materialize())), 2e-4);
  EXPECT_NEAR(emp, 0.6079, 2e-3);
  EXPECT_LE(emp, 1.0);
  EXPECT_BFREE_ERROR(block_frequencies(sq, 25, {{1, 100}}), ErrorKind::BudgetExceeded);
}

TEST(Sieve, PowerOfTwoWindows) {
  auto w = power_of_two_windows(3, 5);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[2].length, 32u);
  EXPECT_EQ(w[0].start, 1);
}

TEST(SieveProperty, AgreesWithTrialDivision) {
  SplitMix64 rng(301);
  for (int t = 0; t < 300; ++t) {
    auto mods = random_family(rng, 6, 80);
    const auto start = static_cast<std::int64_t>(rng.uniform(0, 2000)) - 1000;
    const auto len = rng.uniform(1, 700);
    SieveOptions o;
    o.chunk_bits = 64 * rng.uniform(1, 4);  // force several chunks
    auto w = sieve_window(BFamily::explicit_of(mods), start, len, o);
    ASSERT_EQ(w.to_string(), oracle::eta_string(mods, start, static_cast<std::int64_t>(len)));
  }
}

TEST(SieveProperty, ThreadCountDoesNotChangeOutput) {
  auto f = BFamily::squares_of_primes();
  SieveOptions one, four;
  one.chunk_bits = four.chunk_bits = 1 << 12;
  four.parallelism.threads = 4;
  auto a = sieve_window(f, -5000, 100'000, one);
  auto b = sieve_window(f, -5000, 100'000, four);
  EXPECT_EQ(a.words, b.words);
}

TEST(SieveProperty, FinitePeriodicity) {
  SplitMix64 rng(302);
  for (int t = 0; t < 200; ++t) {
    auto mods = random_family(rng, 5, 30);
    const auto L = oracle::lcm(mods);
    if (L > 200'000) continue;
    const auto start = static_cast<std::int64_t>(rng.uniform(0, 1000));
    auto w = sieve_window(BFamily::explicit_of(mods), start, 2 * L);
    for (std::uint64_t i = 0; i < L; ++i) ASSERT_EQ(w.bit(i), w.bit(i + L));
  }
}

TEST(SieveProperty, MirskyExactOnWholePeriods) {
  SplitMix64 rng(303);
  for (int t = 0; t < 100; ++t) {
    auto mods = random_family(rng, 4, 20);
    const auto L = oracle::lcm(mods);
    if (L > 50'000) continue;
    const unsigned len = static_cast<unsigned>(rng.uniform(1, 6));
    const auto m = rng.uniform(1, 3);
    const auto start = static_cast<std::int64_t>(rng.uniform(1, 500));
    auto f = block_frequencies(BFamily::explicit_of(mods), len, {{start, m * L + len - 1}});
    for (const auto& e : f) {
      ASSERT_TRUE(e.exact);
      ASSERT_EQ(e.frequency, *e.exact) << e.block.to_string();
      ASSERT_LE(e.count, e.window_length);
      ASSERT_GE(e.frequency, Rational(0));
      ASSERT_LE(e.frequency, Rational(1));
    }
  }
}

TEST(SieveProperty, FrequencyStabilizesAtPeriodMultiples) {
  SplitMix64 rng(304);
  for (int t = 0; t < 50; ++t) {
    auto mods = random_family(rng, 4, 15);
    const auto L = oracle::lcm(mods);
    if (L > 20'000) continue;
    const auto exact = Rational(1) - oracle::density(mods);
    for (std::uint64_t m = 1; m <= 4; ++m) {
      auto w = sieve_window(BFamily::explicit_of(mods), 1, m * L);
      ASSERT_EQ(Rational(BigInt(w.count_ones()), BigInt(m * L)), exact);
    }
  }
}

TEST(SieveProperty, GapsPositiveAndPositionsIncreasing) {
  SplitMix64 rng(305);
  for (int t = 0; t < 100; ++t) {
    auto mods = random_family(rng, 4, 40);
    auto w = sieve_window(BFamily::explicit_of(mods), 1, 5000);
    auto g = gap_statistics(w, 3);
    for (std::size_t j = 1; j < g.positions.size(); ++j) ASSERT_LT(g.positions[j - 1], g.positions[j]);
    for (auto x : g.gaps) ASSERT_GT(x, 0u);
    for (std::size_t K = 1; K < g.min_window_gaps.size(); ++K)
      ASSERT_LE(g.min_window_gaps[K], g.min_window_gaps[K - 1]);
  }
}
