#ifndef BFREE_COMMON_HPP
#define BFREE_COMMON_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class ErrorKind {
  InvalidArgument,
  EmptyFamily,
  StepOverflowBudget,
  NotPrimitive,
  InsufficientFreePositions,
  BudgetExceeded,
  NotInY,
  MissingBehrendFlag,
  ParseError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::StepOverflowBudget: return "StepOverflowBudget";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::InsufficientFreePositions: return "InsufficientFreePositions";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotInY: return "NotInY";
    case ErrorKind::MissingBehrendFlag: return "MissingBehrendFlag";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Limits shared by the exact (residue-enumerating) code paths.
struct Budget {
  unsigned lcm_bits = 64;                    // lcm must fit in this many bits
  std::uint64_t max_period_scan = 1ull << 28;  // residues enumerated per period
};

namespace arith {

/// n mod b in [0, b), also for negative n.
inline std::uint64_t floor_mod(std::int64_t n, std::uint64_t b) {
  if (n >= 0) return static_cast<std::uint64_t>(n) % b;
  // -(n+1) is non-negative and representable for every int64 n < 0.
  std::uint64_t m = static_cast<std::uint64_t>(-(n + 1)) % b;
  return b - 1 - m;
}

/// lcm(a, b) or nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t q = a / g;
  if (q > std::numeric_limits<std::uint64_t>::max() / b) return std::nullopt;
  return q * b;
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return a / boost::multiprecision::gcd(a, b) * b;
}

inline unsigned bit_length(const BigInt& v) {
  return v == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1u;
}

/// Primes p <= n by a plain byte sieve.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    if (i <= n / i)
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

/// Prime factorization by trial division.
inline std::map<std::uint64_t, unsigned> factorize(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> f;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

/// Sorted divisors of the number with factorization `f` that do not exceed `cap`.
inline std::vector<std::uint64_t> divisors_up_to(const std::map<std::uint64_t, unsigned>& f,
                                                 std::uint64_t cap) {
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = divs.size();
    for (std::size_t i = 0; i < base; ++i) {
      std::uint64_t v = divs[i];
      for (unsigned k = 0; k < e; ++k) {
        if (v > cap / p) break;
        v *= p;
        divs.push_back(v);
      }
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  return divisors_up_to(factorize(n), n);
}

/// lcm of a list of moduli as a prime factorization (max exponents).
inline std::map<std::uint64_t, unsigned> lcm_factorization(const std::vector<std::uint64_t>& mods) {
  std::map<std::uint64_t, unsigned> out;
  for (auto b : mods)
    for (const auto& [p, e] : factorize(b)) out[p] = std::max(out[p], e);
  return out;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace arith
}  // namespace bfree

#endif  // BFREE_COMMON_HPP
