#ifndef BFREE_BLOCK_HPP
#define BFREE_BLOCK_HPP

#include "bfree/common.hpp"

#include <string_view>

namespace bfree {

/// Finite 0/1 word. Position i of the word is coordinate i+1 when a support
/// is taken, matching blocks written over [1, n].
class Block {
 public:
  Block() = default;
  explicit Block(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
      if (b > 1) throw Error(ErrorKind::InvalidArgument, "block symbols must be 0 or 1");
  }

  static Block from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') throw Error(ErrorKind::InvalidArgument, "block must be a 0/1 string");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Block(std::move(bits));
  }

  /// Block with ones exactly at the given positions of [1, n].
  static Block from_support(const std::vector<std::int64_t>& support, std::size_t n) {
    std::vector<std::uint8_t> bits(n, 0);
    for (auto p : support) {
      if (p < 1 || static_cast<std::size_t>(p) > n) throw Error(ErrorKind::InvalidArgument, "support outside [1,n]");
      bits[static_cast<std::size_t>(p - 1)] = 1;
    }
    return Block(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Sorted positions in [1, n] carrying a 1.
  std::vector<std::int64_t> support() const {
    std::vector<std::int64_t> s;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) s.push_back(static_cast<std::int64_t>(i) + 1);
    return s;
  }

  std::size_t ones() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  /// Coordinatewise <=.
  bool dominated_by(const Block& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (bits_[i] > other.bits_[i]) return false;
    return true;
  }

  /// Bit i of the code is symbol i (requires size() <= 64).
  std::uint64_t code() const {
    if (size() > 64) throw Error(ErrorKind::InvalidArgument, "block longer than 64 symbols");
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) c |= static_cast<std::uint64_t>(bits_[i]) << i;
    return c;
  }
  static Block from_code(std::uint64_t code, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((code >> i) & 1u);
    return Block(std::move(bits));
  }

  friend bool operator==(const Block&, const Block&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace bfree

#endif  // BFREE_BLOCK_HPP
