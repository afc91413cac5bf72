// Connective inventory and fragments (subsets of the inventory). A fragment
// selects which constants/connectives formulas may use and which inference
// rules the builtin calculus carries.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flw/errors.hpp"

namespace flw {

enum class Conn : std::uint8_t {
  Zero,  // constant 0
  One,   // constant 1
  Top,   // constant top
  Bot,   // constant bot
  Fuse,  // a*b   (multiplicative conjunction)
  And,   // a/\b  (additive conjunction)
  Or,    // a\/b  (additive disjunction)
  Under, // a\b   (residual: a under b)
  Over,  // a/b   (residual: a over b)
};

inline constexpr int kConnCount = 9;

constexpr bool conn_is_constant(Conn c) {
  return c == Conn::Zero || c == Conn::One || c == Conn::Top || c == Conn::Bot;
}

// Fixed ascii spellings used by the canonical text format.
const char* conn_token(Conn c);

struct Fragment {
  std::uint16_t mask = 0;

  static Fragment full();
  static Fragment none() { return Fragment{}; }
  static Fragment of(std::initializer_list<Conn> cs);

  bool has(Conn c) const { return (mask >> static_cast<int>(c)) & 1u; }
  Fragment& add(Conn c) {
    mask = static_cast<std::uint16_t>(mask | (1u << static_cast<int>(c)));
    return *this;
  }
  bool contains(Fragment other) const { return (mask & other.mask) == other.mask; }
  bool operator==(const Fragment&) const = default;

  // Throws MissingConnective when c is outside this fragment.
  void require(Conn c, const std::string& who) const;

  std::vector<Conn> connectives() const;
  std::string to_string() const; // comma-joined canonical names, "full", or "none"
};

// Parses a comma-separated fragment description. Accepted names per
// connective: 0, 1, top, bot, fus (alias *), and (alias /\), or (alias \/),
// ldiv (alias \), rdiv (alias /); plus the words "full" and "none".
Fragment parse_fragment(const std::string& text);

} // namespace flw
