// Acceptance suite: one PASS/FAIL line per criterion.
//   bfree_acceptance                 run all criteria
//   bfree_acceptance --criterion N   run one; exit status 1 on FAIL

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bfree/abundant.hpp"
#include "bfree/admissibility.hpp"
#include "bfree/density.hpp"
#include "bfree/dynamics.hpp"
#include "bfree/progressions.hpp"
#include "bfree/random.hpp"
#include "bfree/sieve.hpp"
#include "bfree/taut.hpp"

using namespace bfree;
using arith::to_double;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double limit_s = 0;  // wall-clock bound, 0 = none
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

const double kSquarefree = 6.0 / (std::numbers::pi * std::numbers::pi);

Outcome c1() {
  auto w = sieve_window(BFamily::squares_of_primes(3163), 1, 10'000'000);
  const double f = static_cast<double>(w.count_ones()) / 1e7;
  return {std::abs(f - 0.607927) <= 1e-3, "frequency " + fmt(f) + " target 0.607927 tol 1e-3", 10};
}

Outcome c2() {
  auto rep = davenport_erdos(BFamily::squares_of_primes(), {100, 1000, 10000});
  bool mono = true;
  for (std::size_t i = 1; i < rep.de_sequence.size(); ++i)
    mono = mono && rep.de_sequence[i - 1].value <= rep.de_sequence[i].value;
  const double last = to_double(rep.de_sequence.back().value);
  const double err = std::abs(last - (1 - kSquarefree));
  return {mono && err <= 1e-3,
          std::string("nondecreasing ") + (mono ? "yes" : "no") + ", d(K=1e4) " + fmt(last) + " vs 1-6/pi^2 " +
              fmt(1 - kSquarefree) + " error " + fmt(err) + " tol 1e-3",
          5};
}

Outcome c3() {
  const auto block = Block::from_string("110011100110");
  const std::vector<std::uint64_t> mods{4, 6};
  auto sig = admissible(block, mods);
  const bool defic = sig.of(4) == 1 && sig.of(6) == 1;
  auto search = eta_admissible_search(block, BFamily::explicit_of(mods), 12, true);
  const bool not_found = !search.found_at && search.definitive;
  const bool unsat = !ther_solve(block.support(), mods).satisfiable;
  return {defic && not_found && unsat,
          std::string("deficiencies 1,1: ") + (defic ? "yes" : "no") + "; dominated search NotFound-definitive: " +
              (not_found ? "yes" : "no") + "; ther unsatisfiable: " + (unsat ? "yes" : "no"),
          1};
}

Outcome c4() {
  auto r = rogers_fuzz(10'000, 4, 6, 50);
  return {r.instances == 10'000 && r.violations == 0,
          std::to_string(r.instances) + " instances, " + std::to_string(r.violations) + " violations", 10};
}

Outcome c5() {
  SplitMix64 rng(5);
  int families = 0, agree = 0;
  std::string bad;
  while (families < 100) {
    std::vector<std::uint64_t> v;
    const auto k = rng.uniform(1, 6);
    for (std::uint64_t i = 0; i < k; ++i) v.push_back(rng.uniform(2, 40));
    std::sort(v.begin(), v.end());
    v = primitive_reduce_sorted(std::vector<std::uint64_t>(v.begin(), std::unique(v.begin(), v.end())));
    const auto L = lcm_of(v);
    if (L > 1'000'000) continue;
    ++families;
    const auto p = minimal_period(v);
    if (BigInt(p) == L) ++agree;
    else if (bad.empty()) bad = ", first mismatch lcm " + L.str() + " period " + std::to_string(p);
  }
  return {agree == 100, std::to_string(agree) + "/100 families with minimal period = lcm" + bad, 30};
}

Outcome c6() {
  auto est = entropy_estimate({2, 3}, {6, 12, 18, 24}, CountMode::EtaDominated);
  bool above = true, decreasing = true;
  std::string trail;
  for (std::size_t i = 0; i < est.size(); ++i) {
    above = above && est[i].estimate >= 1.0 / 3;
    if (i) decreasing = decreasing && est[i].estimate < est[i - 1].estimate;
    trail += (i ? ", " : "") + std::string("n=") + std::to_string(est[i].n) + " " + fmt(est[i].estimate);
  }
  const double err = std::abs(est.back().estimate - 1.0 / 3);
  return {above && decreasing && err <= 0.05,
          trail + "; from above " + (above && decreasing ? "yes" : "no") + ", error at n=24 " + fmt(err) +
              " tol 0.05",
          60};
}

Outcome c7() {
  auto w = sieve_window(BFamily::explicit_of({4, 9, 25}), 0, 10'001);
  auto z = zero_block_scan(w, 3);
  return {z.found && z.occurrences >= 2 && z.max_gap_between_occurrences <= 900,
          "occurrences " + std::to_string(z.occurrences) + ", first " + std::to_string(z.first) + ", max gap " +
              std::to_string(z.max_gap_between_occurrences) + " bound 900",
          1};
}

Outcome c8() {
  auto rep = toeplitz_verify(BFamily::explicit_of({6, 20, 56}), 1, 100'000);
  auto dy = certify_dyadic_periods({3, 5, 7}, 1, 100'000);
  const bool all = dy.failures.empty() && dy.certified == dy.ones;
  return {rep.fraction_periodic == 1.0 && all,
          "fraction periodic " + fmt(rep.fraction_periodic) + "; dyadic periods certified " +
              std::to_string(dy.certified) + "/" + std::to_string(dy.ones),
          10};
}

Outcome c9() {
  auto input = BFamily::union_of({BFamily::explicit_of({3}), BFamily::scaled(2, BFamily::primes(10'000), true)});
  auto red = reduce_taut(input);
  const auto out = red.output.materialize();
  const bool reduced = out == std::vector<std::uint64_t>{2, 3};
  auto cmp = verify_mirsky_preserved(input, red.output, 10'000'000, 3);
  return {reduced && cmp.max_abs_gap <= 0.01 && cmp.dominated,
          std::string("output {2,3}: ") + (reduced ? "yes" : "no") + "; max block-frequency gap " +
              fmt(cmp.max_abs_gap) + " (block " + cmp.worst_block.to_string() + ") tol 0.01; eta' <= eta: " +
              (cmp.dominated ? "yes" : "no"),
          30};
}

Outcome c10() {
  std::vector<std::uint64_t> mods{4, 6};
  for (std::uint64_t p : arith::primes_up_to(50))
    if (p > 12) mods.push_back(p * p);
  std::sort(mods.begin(), mods.end());
  const unsigned n = 8;
  auto eta = sieve_moduli(mods, 1, 10'000'000 + n - 1);
  std::vector<std::uint64_t> seen;
  for (const auto& [w, k] : observed_words(eta, n)) seen.push_back(w);
  seen = detail::maximal_masks(seen);
  unsigned admissible_without_ther = 0, ther_not_found = 0, eta_adm = 0, ther_sat = 0;
  for (std::uint64_t a = 0; a < (1u << n); ++a) {
    std::vector<std::int64_t> supp;
    for (unsigned i = 0; i < n; ++i)
      if (a >> i & 1) supp.push_back(i + 1);
    bool dominated = false;
    for (auto w : seen)
      if ((a & ~w) == 0) {
        dominated = true;
        break;
      }
    const bool sat = ther_solve(supp, mods).satisfiable;
    eta_adm += dominated;
    ther_sat += sat;
    if (dominated && !sat) ++admissible_without_ther;
    if (sat && !dominated) ++ther_not_found;
  }
  return {admissible_without_ther == 0 && ther_not_found == 0,
          std::to_string(eta_adm) + " supports dominated in the window, " + std::to_string(ther_sat) +
              " T_her-satisfiable; eta-admissible without T_her: " + std::to_string(admissible_without_ther) +
              "; T_her but not found: " + std::to_string(ther_not_found),
          120};
}

Outcome c11() {
  std::uint64_t first = 0, first_odd = 0;
  for (std::uint64_t m = 1; !first_odd; ++m) {
    std::uint64_t s = 0;  // trial-division aliquot sum
    for (std::uint64_t d = 1; d * d <= m; ++d)
      if (m % d == 0) s += d + (d * d != m && d != 1 ? m / d : 0);
    if (m == 1) s = 0;
    if (s > m) {
      if (!first) first = m;
      if (m % 2) first_odd = m;
    }
  }
  const bool lib = classify(first).kind == Aliquot::Abundant && classify(first_odd).kind == Aliquot::Abundant &&
                   [&] {
                     for (std::uint64_t m = 1; m < first_odd; ++m)
                       if (classify(m).kind == Aliquot::Abundant && (m % 2 || m < first)) return false;
                     return true;
                   }();
  const auto d5 = deficient_run_density(1'000'000, 5);
  auto gaps = gap_statistics(deficient_window(10'000'000), 1);
  const auto g1 = gaps.min_window_gaps[1];
  return {first == 12 && first_odd == 945 && lib && d5 > Rational(0) && g1 >= 2,
          "first abundant " + std::to_string(first) + ", first odd " + std::to_string(first_odd) +
              ", library agrees " + (lib ? "yes" : "no") + ", run density(1e6, 5) " + fmt(to_double(d5)) +
              ", min-window gap K=1 " + std::to_string(g1),
          60};
}

Outcome c12() {
  const std::uint64_t N = 1'000'000;
  auto fam = BFamily::explicit_of({2, 3});
  auto s = sample_max_entropy(fam, 1, N, 12);
  auto eta = sieve_window(fam, 1, N);
  bool below = true;
  for (std::size_t i = 0; i < s.words.size(); ++i) below = below && (s.words[i] & ~eta.words[i]) == 0;
  const double p = 1.0 / 6, f = static_cast<double>(s.count_ones()) / static_cast<double>(N);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(N));
  return {std::abs(f - p) <= 3 * sigma && below,
          "frequency " + fmt(f) + " vs 1/6, |diff| " + fmt(std::abs(f - p)) + " 3 sigma " + fmt(3 * sigma) +
              "; sample <= eta: " + (below ? "yes" : "no"),
          5};
}

Outcome c13() {
  const std::string cmd = std::string("'") + BFREE_TESTS_PATH + "' --gtest_filter='*Property*' --gtest_brief=1";
  const int st = std::system(cmd.c_str());
  const bool ok = st == 0;
  return {ok, std::string("property suites ") + (ok ? "green" : "have failures (see output above)"), 0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13};
  int failed = 0;
  for (int i = 1; i <= 13; ++i) {
    if (only && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), 0};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = o.limit_s == 0 || secs < o.limit_s;
    const bool pass = o.pass && in_time;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << i << ": " << o.detail << " [" << fmt(secs) << " s";
    if (o.limit_s > 0) std::cout << ", limit " << o.limit_s << " s" << (in_time ? "" : " EXCEEDED");
    std::cout << "]" << std::endl;
    failed += !pass;
  }
  return failed ? 1 : 0;
}
