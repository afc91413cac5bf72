// Immutable formula trees over the residuated-lattice signature, with the
// canonical text format (explicit parentheses, no precedence) and the
// token-count size measure used by the saturation bounds.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flw/fragment.hpp"

namespace flw {

// Value type over a shared immutable node; equality is structural with a
// pointer fast path, hashes are computed once at construction.
class Formula {
public:
  enum class Kind : std::uint8_t { Var, Const, Bin };

  Formula() = default; // empty handle; only valid after assignment

  static Formula var(std::string name);
  static Formula constant(Conn c);
  static Formula bin(Conn c, Formula left, Formula right);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_bin() const { return kind() == Kind::Bin; }
  const std::string& name() const; // Var only
  Conn conn() const;               // Const/Bin
  const Formula& left() const;     // Bin only
  const Formula& right() const;    // Bin only

  std::size_t hash() const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  // Token count of the fully parenthesized rendering: variables and constants
  // count 1, a binary node counts left + right + 3 ("(", op, ")").
  std::size_t size_tokens() const;

  // Canonical display: binary nodes are parenthesized except at top level,
  // operators are written without surrounding spaces.
  std::string to_string() const;

  // Total order for canonical enumerations: by token size, then rendering.
  static bool canonical_less(const Formula& a, const Formula& b);

private:
  struct Node; // completed below, after Formula itself is complete
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  Conn conn;
  std::string name;
  Formula left, right;
  std::size_t hash;
  std::size_t size;
};

inline Formula::Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline Conn Formula::conn() const { return node_->conn; }
inline const Formula& Formula::left() const { return node_->left; }
inline const Formula& Formula::right() const { return node_->right; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::size_tokens() const { return node_->size; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Parses the canonical grammar: identifiers [A-Za-z_][A-Za-z0-9_]*, constants
// 0 1 top bot, binary operators * /\ \/ \ / with explicit parentheses only
// ("a*b*c" is an error). Whitespace between tokens is ignored.
Formula parse_formula(const std::string& text);

// All distinct subformulas of f (f included).
void collect_subformulas(const Formula& f, std::vector<Formula>& out);

// Returns the set of connectives/constants occurring in f as a fragment mask.
Fragment connectives_of(const Formula& f);

} // namespace flw
