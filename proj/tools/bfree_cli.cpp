// Command-line front end. Every subcommand prints one JSON document (or a
// flattened plain/csv rendering of it) on stdout.
//
// Exit status: 0 success, 1 computation error, 2 usage error.

#include "bfree/abundant.hpp"
#include "bfree/admissibility.hpp"
#include "bfree/density.hpp"
#include "bfree/dynamics.hpp"
#include "bfree/family_io.hpp"
#include "bfree/progressions.hpp"
#include "bfree/taut.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::ordered_json;
using namespace bfree;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json rational_json(const Rational& r) {
  return {{"num", boost::multiprecision::numerator(r).str()}, {"den", boost::multiprecision::denominator(r).str()}};
}

BFamily read_family(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_family(arg);
  return load_family(arg);
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      auto v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

/// "A:N" -> (A, N)
std::pair<std::int64_t, std::uint64_t> parse_window(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("window must look like START:LENGTH");
  try {
    std::int64_t a = std::stoll(s.substr(0, colon));
    long long n = std::stoll(s.substr(colon + 1));
    if (n < 1) throw UsageError("window length must be >= 1");
    return {a, static_cast<std::uint64_t>(n)};
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("window must look like START:LENGTH");
  }
}

void flatten(const ordered_json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const ordered_json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (format == "csv") std::cout << "key,value\n";
  for (const auto& [k, v] : rows) std::cout << k << (format == "csv" ? "," : " = ") << v << "\n";
}

std::string bits_string(const EtaWindow& w) { return w.to_string(); }

struct Common {
  std::string family;
  unsigned threads = 1;
  std::string format = "json";
  unsigned lcm_bits = 64;

  SieveOptions sieve() const {
    SieveOptions o;
    o.parallelism = Parallelism::from_env(threads);
    return o;
  }
  Budget budget() const {
    Budget b;
    b.lcm_bits = lcm_bits;
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-free sets: sieves, densities, admissibility and dynamics"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "worker threads (BFREE_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", common.format, "json, csv or plain")->check(CLI::IsMember({"json", "csv", "plain"}));
  bool json_flag = false;
  app.add_flag("--json", json_flag, "same as --format json");
  app.add_option("--lcm-bits", common.lcm_bits, "bit budget for exact periods")->check(CLI::Range(1u, 64u));

  auto family_opt = [&](CLI::App* sub) {
    sub->add_option("--family", common.family, "family JSON file (or inline JSON)")->required();
  };

  // sieve
  auto* sieve = app.add_subcommand("sieve", "eta on a window");
  family_opt(sieve);
  std::int64_t sv_start = 1;
  long long sv_len = 0;
  std::string sv_raw;
  std::size_t sv_gaps = 0;
  std::uint64_t sv_zero = 0;
  bool sv_bits = false;
  sieve->add_option("--start", sv_start, "first integer");
  sieve->add_option("--len", sv_len, "window length")->required();
  std::string sv_out;
  sieve->add_option("--raw", sv_raw, "write the packed raw window to this file");
  sieve->add_option("--out", sv_out, "a .raw path gets the packed window, anything else the JSON report");
  sieve->add_option("--gaps", sv_gaps, "min-window gap statistics up to K");
  sieve->add_option("--zero-block", sv_zero, "scan for zero runs of this length");
  sieve->add_flag("--bits", sv_bits, "include the window as a 0/1 string");

  // density
  auto* dens = app.add_subcommand("density", "Davenport-Erdos truncations and diagnostics");
  family_opt(dens);
  std::string de_kgrid;
  std::uint64_t de_window = 1'000'000;
  dens->add_option("--kgrid", de_kgrid, "comma separated K values")->required();
  dens->add_option("--window", de_window, "diagnostic window [1, N]")->check(CLI::PositiveNumber);

  // taut
  auto* taut = app.add_subcommand("taut", "taut reduction and checks");
  family_opt(taut);
  bool ta_reduce = false, ta_mirsky = false, ta_check = false;
  std::uint64_t ta_window = 1'000'000, ta_trunc = 1'000'000;
  unsigned ta_len = 3;
  taut->add_flag("--reduce", ta_reduce, "run the reduction");
  taut->add_flag("--check", ta_check, "exact tautness of a finite primitive family");
  taut->add_flag("--verify-mirsky", ta_mirsky, "compare block frequencies of input and output");
  taut->add_option("--window", ta_window, "window [1, N] for the comparison")->check(CLI::PositiveNumber);
  taut->add_option("--blocklen", ta_len, "block length for the comparison")->check(CLI::Range(1u, 24u));
  taut->add_option("--truncation", ta_trunc, "truncation for unbounded blocks")->check(CLI::PositiveNumber);

  // admissible
  auto* adm = app.add_subcommand("admissible", "admissibility of a block");
  family_opt(adm);
  std::string ad_block;
  bool ad_ther = false, ad_dom = false;
  std::uint64_t ad_search = 0;
  adm->add_option("--block", ad_block, "0/1 word over positions 1..n")->required();
  adm->add_flag("--ther", ad_ther, "solve the residue placement problem");
  adm->add_option("--search", ad_search, "search eta[k+1, k+n] for k < N")->check(CLI::PositiveNumber);
  adm->add_flag("--dominated", ad_dom, "search for a dominating window instead of an equal one");

  // entropy
  auto* ent = app.add_subcommand("entropy", "plug-in entropy from exact word counts");
  family_opt(ent);
  std::string en_grid, en_mode = "eta_dominated";
  std::uint64_t en_lb = 0;
  ent->add_option("--ngrid", en_grid, "comma separated word lengths")->required();
  ent->add_option("--mode", en_mode, "eta_dominated or all_admissible")
      ->check(CLI::IsMember({"eta_dominated", "all_admissible"}));
  ent->add_option("--lower-bound-offsets", en_lb, "also report the window-support lower bound over this many offsets");

  // proximal
  auto* prox = app.add_subcommand("proximal", "proximality conditions");
  family_opt(prox);
  std::uint64_t pr_k = 3, pr_trunc = 100'000;
  prox->add_option("--zero-k", pr_k, "longest zero run to place")->check(CLI::PositiveNumber);
  prox->add_option("--truncation", pr_trunc, "truncation for unbounded families")->check(CLI::PositiveNumber);

  // toeplitz
  auto* toe = app.add_subcommand("toeplitz", "Toeplitz skeleton and verification");
  family_opt(toe);
  bool to_verify = false;
  std::string to_window = "1:100000", to_dyadic;
  std::size_t to_stages = 0;
  std::uint64_t to_build_window = 1'000'000;
  toe->add_flag("--verify", to_verify, "certify periods on the window");
  toe->add_option("--window", to_window, "START:LENGTH for --verify");
  toe->add_option("--stages", to_stages, "build a skeleton with this many stages");
  toe->add_option("--build-window", to_build_window, "eta is read on [1, N] while building")
      ->check(CLI::PositiveNumber);
  toe->add_option("--dyadic", to_dyadic, "odd factors b_1,b_2,... of B = {b_i 2^i}: certify the dyadic periods");

  // sample-mme
  auto* mme = app.add_subcommand("sample-mme", "sample from the measure of maximal entropy");
  family_opt(mme);
  long long mm_len = 0;
  std::int64_t mm_start = 1;
  std::uint64_t mm_seed = 0;
  bool mm_bits = false;
  mme->add_option("--len", mm_len, "window length")->required();
  mme->add_option("--start", mm_start, "first integer");
  mme->add_option("--seed", mm_seed, "generator seed")->required();
  mme->add_flag("--bits", mm_bits, "include the sampled word");

  // abundant
  auto* ab = app.add_subcommand("abundant", "abundant, perfect and deficient numbers");
  std::uint64_t ab_limit = 0;
  bool ab_gen = false;
  std::uint64_t ab_runs = 0;
  int ab_k = -1;
  std::size_t ab_gap_k = 0;
  ab->add_option("--limit", ab_limit, "upper end of [1, N]")->required()->check(CLI::PositiveNumber);
  ab->add_flag("--generators", ab_gen, "primitive abundant generators up to N");
  ab->add_option("--runs", ab_runs, "density of deficient runs of this length")->check(CLI::PositiveNumber);
  ab->add_option("--coprime-k", ab_k, "smallest abundant number coprime to the first k primes")
      ->check(CLI::NonNegativeNumber);
  ab->add_option("--gap-k", ab_gap_k, "min-window gaps of deficient numbers up to K");

  // rogers-fuzz
  auto* rog = app.add_subcommand("rogers-fuzz", "random instances of the shifted-union inequality");
  std::uint64_t rg_count = 10'000, rg_seed = 1, rg_k = 6, rg_mod = 50;
  rog->add_option("--count", rg_count, "instances");
  rog->add_option("--seed", rg_seed, "generator seed");
  rog->add_option("--max-k", rg_k, "largest number of progressions")->check(CLI::PositiveNumber);
  rog->add_option("--max-mod", rg_mod, "largest modulus")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::string report_path;
  try {
    ordered_json out;
    const auto sopts = common.sieve();
    const auto budget = common.budget();

    if (json_flag) common.format = "json";
    if (sieve->parsed()) {
      if (sv_len < 1) throw UsageError("--len must be >= 1");
      if (!sv_out.empty()) {
        if (sv_out.size() > 4 && sv_out.ends_with(".raw"))
          sv_raw = sv_out;
        else
          report_path = sv_out;
      }
      auto fam = read_family(common.family);
      EtaWindow w = sieve_window(fam, sv_start, static_cast<std::uint64_t>(sv_len), sopts);
      out["start"] = w.start;
      out["length"] = w.length;
      out["ones"] = w.count_ones();
      out["frequency_of_one"] = static_cast<double>(w.count_ones()) / static_cast<double>(w.length);
      out["moduli_sieved"] = w.moduli.size();
      if (sv_bits) out["bits"] = bits_string(w);
      if (!sv_raw.empty()) {
        std::ofstream f(sv_raw, std::ios::binary);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + sv_raw);
        write_raw(f, w);
        out["raw"] = sv_raw;
      }
      if (sieve->count("--gaps")) {
        auto g = gap_statistics(w, sv_gaps);
        out["min_window_gaps"] = g.min_window_gaps;
        out["free_positions"] = g.positions.size();
      }
      if (sieve->count("--zero-block")) {
        auto z = zero_block_scan(w, sv_zero);
        out["zero_block"] = {{"k", sv_zero}, {"found", z.found}, {"occurrences", z.occurrences},
                             {"first", z.found ? ordered_json(z.first) : ordered_json(nullptr)},
                             {"max_gap", z.max_gap_between_occurrences}};
      }
    } else if (dens->parsed()) {
      auto fam = read_family(common.family);
      DensityOptions o;
      o.budget = budget;
      o.sample_window = de_window;
      o.sieve = sopts;
      auto rep = davenport_erdos(fam, parse_list<std::uint64_t>(de_kgrid, "K"), o);
      out["exact_density_M"] = rep.exact_density_M ? rational_json(*rep.exact_density_M) : ordered_json(nullptr);
      out["de_sequence"] = ordered_json::array();
      for (const auto& e : rep.de_sequence)
        out["de_sequence"].push_back({{"K", e.K},
                                      {"moduli", e.moduli},
                                      {"value", rational_json(e.value)},
                                      {"approx", arith::to_double(e.value)},
                                      {"method", to_string(e.method)}});
      out["delta_estimate"] = rational_json(rep.delta_estimate);
      out["delta_estimate_approx"] = arith::to_double(rep.delta_estimate);
      out["log_partial_sums"] = ordered_json::array();
      for (const auto& [n, v] : rep.log_partial_sums) out["log_partial_sums"].push_back({{"N", n}, {"value", v}});
      ordered_json flags;
      flags["thin"] = rep.flags.thin;
      flags["reciprocal_sums"] = ordered_json::array();
      for (const auto& [k, v] : rep.flags.reciprocal_sums) flags["reciprocal_sums"].push_back({{"K", k}, {"sum", v}});
      flags["light_tails_estimate"] = ordered_json::array();
      for (const auto& t : rep.flags.light_tails_estimate)
        flags["light_tails_estimate"].push_back({{"K", t.K}, {"union_bound", t.union_bound}, {"sampled", t.sampled}});
      flags["besicovitch_diagnostic"] = ordered_json::array();
      for (const auto& [k, v] : rep.flags.besicovitch_diagnostic)
        flags["besicovitch_diagnostic"].push_back({{"K", k}, {"value", v}});
      flags["behrend_diagnostic"] = rep.flags.behrend_diagnostic;
      out["flags"] = flags;
    } else if (taut->parsed()) {
      auto fam = read_family(common.family);
      out["input"] = family_to_json(fam);
      if (ta_check) {
        auto v = taut_check_finite(fam.materialize(), budget);
        out["is_taut"] = v.is_taut;
        out["witnesses"] = ordered_json::array();
        for (const auto& w : v.witnesses)
          out["witnesses"].push_back(
              {{"b", w.b}, {"with_b", rational_json(w.with_b)}, {"without_b", rational_json(w.without_b)}});
      }
      if (ta_reduce || ta_mirsky) {
        TautOptions o;
        o.truncation = ta_trunc;
        auto red = reduce_taut(fam, o);
        out["stopped_at"] = to_string(red.stopped_at);
        out["steps"] = ordered_json::array();
        for (const auto& s : red.steps)
          out["steps"].push_back(
              {{"c", s.c}, {"removed_explicit", s.removed_explicit}, {"removed_blocks", s.removed_blocks}});
        out["truncation"] = red.truncation;
        out["output"] = red.output.materialize();
        if (ta_mirsky) {
          auto cmp = verify_mirsky_preserved(fam, red.output, ta_window, ta_len, sopts);
          out["mirsky"] = {{"window", ta_window},
                           {"block_length", ta_len},
                           {"max_abs_gap", cmp.max_abs_gap},
                           {"worst_block", cmp.worst_block.to_string()},
                           {"output_dominated_by_input", cmp.dominated}};
        }
      }
    } else if (adm->parsed()) {
      auto fam = read_family(common.family);
      Block block = [&] {
        try {
          return Block::from_string(ad_block);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }();
      if (block.size() == 0) throw UsageError("--block must be nonempty");
      out["block"] = block.to_string();
      out["support"] = block.support();
      if (fam.is_bounded()) {
        auto mods = fam.materialize();
        auto sig = admissible(block, mods);
        out["admissible"] = sig.admissible();
        out["in_Y"] = sig.in_Y();
        out["deficiency"] = ordered_json::array();
        for (const auto& [b, s] : sig.deficiency) out["deficiency"].push_back({{"b", b}, {"s", s}});
        if (ad_ther) {
          auto w = ther_solve(block.support(), mods);
          out["ther"] = {{"satisfiable", w.satisfiable}, {"assignment", ordered_json::array()}};
          for (const auto& [b, n] : w.assignment) out["ther"]["assignment"].push_back({{"b", b}, {"n_b", n}});
        }
      } else if (ad_ther) {
        throw Error(ErrorKind::InvalidArgument, "the placement problem needs a bounded family");
      }
      if (adm->count("--search")) {
        auto r = eta_admissible_search(block, fam, ad_search, ad_dom, sopts, budget);
        out["mode"] = ad_dom ? "dominated" : "exact";
        out["found"] = r.found_at.has_value();
        out["found_at"] = r.found_at ? ordered_json(*r.found_at) : ordered_json(nullptr);
        out["definitive"] = r.definitive;
        out["offsets_searched"] = r.offsets_searched;
      }
    } else if (ent->parsed()) {
      auto fam = read_family(common.family);
      auto mods = fam.materialize();
      CountOptions o;
      o.budget = budget;
      auto mode = en_mode == "eta_dominated" ? CountMode::EtaDominated : CountMode::AllAdmissible;
      out["mode"] = en_mode;
      out["estimates"] = ordered_json::array();
      for (const auto& p : entropy_estimate(mods, parse_list<std::size_t>(en_grid, "n"), mode, o))
        out["estimates"].push_back({{"n", p.n}, {"count", p.count.str()}, {"estimate", p.estimate}});
      if (en_lb) {
        out["lower_bounds"] = ordered_json::array();
        for (auto n : parse_list<std::size_t>(en_grid, "n")) {
          auto lb = entropy_lower_bound(fam, n, en_lb, sopts);
          out["lower_bounds"].push_back({{"n", n}, {"best", lb.best}, {"mean", lb.mean}});
        }
      }
    } else if (prox->parsed()) {
      auto fam = read_family(common.family);
      ProximalityOptions o;
      o.zero_block_k_max = pr_k;
      o.truncation = pr_trunc;
      o.budget = budget;
      auto v = proximality_suite(fam, o);
      out["overall"] = to_string(v.overall);
      out["zero_blocks"] = ordered_json::array();
      for (const auto& z : v.zero_blocks)
        out["zero_blocks"].push_back(
            {{"k", z.k},
             {"crt_moduli", z.crt_moduli},
             {"crt_solution", z.crt_solution ? ordered_json(*z.crt_solution) : ordered_json(nullptr)},
             {"crt_modulus", z.crt_modulus ? ordered_json(*z.crt_modulus) : ordered_json(nullptr)},
             {"observed", z.scan.found},
             {"observed_max_gap", z.scan.max_gap_between_occurrences}});
      out["tprox_max_k"] = v.tprox_max_k;
      out["tprox_tuple"] = v.tprox_tuple;
      out["coprime_subset_size"] = v.coprime_subset.size();
      out["infinite_coprime_subset"] = v.infinite_coprime_subset;
      out["free_class_modulus"] = v.free_class_modulus ? ordered_json(*v.free_class_modulus) : ordered_json(nullptr);
      out["free_class_count"] = v.free_class_count;
      out["free_classes"] = v.free_classes;
      out["witness_ap"] = v.witness_ap ? ordered_json({{"d", v.witness_ap->first}, {"r", v.witness_ap->second}})
                                       : ordered_json(nullptr);
    } else if (toe->parsed()) {
      auto fam = read_family(common.family);
      if (!to_verify && to_stages == 0 && to_dyadic.empty())
        throw UsageError("toeplitz needs --verify, --stages or --dyadic");
      if (to_verify) {
        auto [a, n] = parse_window(to_window);
        ToeplitzVerifyOptions o;
        o.sieve = sopts;
        auto rep = toeplitz_verify(fam, a, n, o);
        out["verify"] = {{"start", a},
                         {"length", n},
                         {"fraction_periodic", rep.fraction_periodic},
                         {"certified", rep.certified},
                         {"counterexamples", rep.counterexamples}};
      }
      if (to_stages) {
        ToeplitzOptions o;
        o.window = to_build_window;
        o.budget = budget;
        auto sk = build_minimal_toeplitz(fam, to_stages, o);
        out["skeleton"] = {{"degenerate", sk.degenerate},
                           {"partial", sk.partial},
                           {"maximality_certified", sk.maximality_certified},
                           {"consistent", skeleton_consistent(sk)},
                           {"stop_reason", sk.stop_reason},
                           {"stages", ordered_json::array()}};
        for (const auto& s : sk.stages)
          out["skeleton"]["stages"].push_back({{"block", s.block.to_string()},
                                               {"l", s.l},
                                               {"r", s.r},
                                               {"m", s.m},
                                               {"d", s.d},
                                               {"verified", s.verified},
                                               {"verified_repeats", s.verified_repeats}});
      }
      if (!to_dyadic.empty()) {
        auto [a, n] = parse_window(to_window);
        auto c = certify_dyadic_periods(parse_list<std::uint64_t>(to_dyadic, "factor"), a, n);
        out["dyadic"] = {{"ones", c.ones}, {"certified", c.certified}, {"failures", c.failures}};
      }
    } else if (mme->parsed()) {
      if (mm_len < 1) throw UsageError("--len must be >= 1");
      auto fam = read_family(common.family);
      auto w = sample_max_entropy(fam, mm_start, static_cast<std::uint64_t>(mm_len), mm_seed, sopts);
      out["start"] = w.start;
      out["length"] = w.length;
      out["seed"] = mm_seed;
      out["generator"] = "splitmix64";
      out["ones"] = w.count_ones();
      out["frequency_of_one"] = static_cast<double>(w.count_ones()) / static_cast<double>(w.length);
      if (mm_bits) out["bits"] = bits_string(w);
    } else if (ab->parsed()) {
      auto par = Parallelism::from_env(common.threads);
      auto cls = classify_range(1, ab_limit, par);
      std::uint64_t na = 0, np = 0, nd = 0;
      std::optional<std::uint64_t> first_abundant, first_odd_abundant;
      for (std::uint64_t n = 1; n <= ab_limit; ++n) {
        switch (cls[n - 1]) {
          case Aliquot::Abundant:
            ++na;
            if (!first_abundant) first_abundant = n;
            if (n % 2 && !first_odd_abundant) first_odd_abundant = n;
            break;
          case Aliquot::Perfect: ++np; break;
          case Aliquot::Deficient: ++nd; break;
        }
      }
      out["limit"] = ab_limit;
      out["abundant"] = na;
      out["perfect"] = np;
      out["deficient"] = nd;
      out["first_abundant"] = first_abundant ? ordered_json(*first_abundant) : ordered_json(nullptr);
      out["first_odd_abundant"] = first_odd_abundant ? ordered_json(*first_odd_abundant) : ordered_json(nullptr);
      if (ab_gen) {
        auto g = primitive_abundant_generators(ab_limit, par).materialize();
        double recip = 0;
        for (auto b : g) recip += 1.0 / static_cast<double>(b);
        out["generators"] = {{"count", g.size()}, {"reciprocal_sum", recip}, {"elements", g}};
      }
      if (ab->count("--runs")) {
        auto r = deficient_run_density(ab_limit, ab_runs, par);
        out["deficient_runs"] = {{"run_length", ab_runs}, {"density", rational_json(r)},
                                 {"approx", arith::to_double(r)}};
      }
      if (ab->count("--gap-k")) {
        auto g = gap_statistics(deficient_window(ab_limit, par), ab_gap_k);
        out["deficient_min_window_gaps"] = g.min_window_gaps;
      }
      if (ab_k >= 0) out["smallest_abundant_coprime"] = {{"k", ab_k}, {"n", smallest_abundant_coprime_to(ab_k).str()}};
    } else if (rog->parsed()) {
      auto r = rogers_fuzz(rg_count, rg_seed, rg_k, rg_mod);
      out["instances"] = r.instances;
      out["violations"] = r.violations;
      out["seed"] = rg_seed;
      out["examples"] = ordered_json::array();
      for (const auto& [m, res] : r.examples) out["examples"].push_back({{"mods", m}, {"residues", res}});
    }
    if (!report_path.empty()) {
      std::ofstream f(report_path);
      if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + report_path);
      f << out.dump(2) << "\n";
    } else {
      emit(out, common.format);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
