// Deduction trees, the deduction checker (validity, standardness of cuts,
// analyticity), theory regularity, and the s-expression derivation format.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flw/rules.hpp"

namespace flw {

// A node is either a theory leaf (sequent assumed from the theory) or a rule
// application; axiom leaves are rule applications with zero children. Nodes
// built programmatically carry their substitution; parsed nodes do not, and
// the checker falls back to instance matching.
struct Derivation {
  enum class Just : std::uint8_t { Rule, TheoryLeaf };
  Just just = Just::Rule;
  Sequent sequent;
  std::string rule; // empty for theory leaves
  std::optional<Substitution> subst;
  std::vector<Derivation> children;

  static Derivation theory_leaf(Sequent s);
  static Derivation rule_node(std::string rule, Sequent concl,
                              std::vector<Derivation> children,
                              std::optional<Substitution> subst = std::nullopt);

  std::size_t node_count() const;
};

struct CheckReport {
  bool valid = true;
  bool standard = true; // every cut's left premise is a theory leaf
  bool analytic = true; // every formula of every node is in the alphabet
  std::vector<std::pair<std::string, std::string>> violations; // (node path, reason)

  bool all() const { return valid && standard && analytic; }
  std::string summary() const;
};

// Checks d against calculus c and theory t. The analyticity alphabet is
// `phi` when given, otherwise the subformula closure of t plus d's root.
CheckReport check_deduction(const Calculus& c, const Theory& t, const Derivation& d,
                            const std::vector<Formula>* phi = nullptr);

// A theory is regular when every sequent has a variables-only antecedent and
// a nonempty succedent.
bool is_regular(const Theory& t);

// Rewrites a valid deduction into one whose cuts all have theory-leaf left
// premises, preserving the end sequent. Requires a builtin-only calculus and
// a regular theory; throws InvalidInput otherwise (also when d is invalid).
Derivation normalize_to_standard(const Calculus& c, const Theory& t, const Derivation& d);

// S-expression file format:
//   (node "SEQ" RULE (child...))   rule application
//   (theory "SEQ")                 theory leaf
Derivation parse_derivation(const std::string& text);
std::string print_derivation(const Derivation& d);

} // namespace flw
