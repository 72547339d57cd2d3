#ifndef BFREE_FAMILY_IO_HPP
#define BFREE_FAMILY_IO_HPP

// JSON encoding of B-families:
//   {"type": "explicit", "mods": [4, 6]}
//   {"type": "squares_of_primes", "limit": 97}      (limit bounds p; optional)
//   {"type": "primes", "limit": 10000}               (optional limit)
//   {"type": "scaled", "c": 2, "behrend": true, "base": {...}}
//   {"type": "union", "parts": [{...}, ...]}

#include "bfree/bset.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace bfree {

inline BFamily family_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    auto limit_of = [&]() -> std::optional<std::uint64_t> {
      if (j.contains("limit") && !j.at("limit").is_null()) return j.at("limit").get<std::uint64_t>();
      return std::nullopt;
    };
    if (type == "explicit") return BFamily::explicit_of(j.at("mods").get<std::vector<std::uint64_t>>());
    if (type == "squares_of_primes") return BFamily::squares_of_primes(limit_of());
    if (type == "primes") return BFamily::primes(limit_of());
    if (type == "scaled") {
      std::optional<bool> flag;
      if (j.contains("behrend") && !j.at("behrend").is_null()) flag = j.at("behrend").get<bool>();
      return BFamily::scaled(j.at("c").get<std::uint64_t>(), family_from_json(j.at("base")), flag);
    }
    if (type == "union") {
      std::vector<BFamily> parts;
      for (const auto& p : j.at("parts")) parts.push_back(family_from_json(p));
      return BFamily::union_of(std::move(parts));
    }
    throw Error(ErrorKind::ParseError, "unknown family type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline nlohmann::ordered_json family_to_json(const BFamily& f) {
  using nlohmann::ordered_json;
  return std::visit(
      [](const auto& d) -> ordered_json {
        using T = std::decay_t<decltype(d)>;
        ordered_json j;
        if constexpr (std::is_same_v<T, ExplicitMods>) {
          j["type"] = "explicit";
          j["mods"] = d.mods;
        } else if constexpr (std::is_same_v<T, SquaresOfPrimes> || std::is_same_v<T, PrimesOnly>) {
          j["type"] = std::is_same_v<T, SquaresOfPrimes> ? "squares_of_primes" : "primes";
          if (d.limit) j["limit"] = *d.limit;
        } else if constexpr (std::is_same_v<T, ScaledFamily>) {
          j["type"] = "scaled";
          j["c"] = d.c;
          if (d.behrend) j["behrend"] = *d.behrend;
          j["base"] = family_to_json(*d.base);
        } else {
          j["type"] = "union";
          j["parts"] = ordered_json::array();
          for (const auto& p : d.parts) j["parts"].push_back(family_to_json(p));
        }
        return j;
      },
      f.descriptor());
}

inline BFamily parse_family(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return family_from_json(j);
}

inline BFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open family file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str());
}

}  // namespace bfree

#endif  // BFREE_FAMILY_IO_HPP
