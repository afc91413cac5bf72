// Single-succedent sequents with possibly empty right side, theories (finite
// sequent sets), the fusion fold / flatten pair, subformula closures, the
// sequent-to-formula translation, and the token-size measures.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flw/formula.hpp"

namespace flw {

struct Sequent {
  std::vector<Formula> antecedent;
  std::optional<Formula> succedent; // nullopt = empty right side

  bool operator==(const Sequent& other) const;
  std::size_t hash() const;

  // Token count: antecedent formulas + comma tokens + turnstile + succedent.
  std::size_t size_tokens() const;

  std::string to_string() const; // "a,b |- c" / "a |-" / "|- c"

  static bool canonical_less(const Sequent& a, const Sequent& b);
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const { return s.hash(); }
};

using Theory = std::vector<Sequent>; // duplicates collapsed on load

// Parsing. parse_sequent accepts "F1,...,Fn |- G", empty sides allowed.
// parse_theory reads one sequent per line; '#' starts a comment; blank lines
// are skipped; duplicates are collapsed (first occurrence kept).
Sequent parse_sequent(const std::string& text);
Theory parse_theory(const std::string& text);
std::string print_theory(const Theory& t);

// Right-nested fusion of a formula sequence; the empty sequence folds to the
// multiplicative unit. Requires Fuse (and One when empty) in the fragment.
Formula fold_fusion(std::span<const Formula> items, Fragment frag);

// Inverse of fold_fusion on variable sequences: peels a fusion of variables
// (any association) into the left-to-right variable-name sequence; the bare
// unit peels to the empty sequence. Throws NotFlattenable otherwise.
std::vector<std::string> flatten(const Formula& f);

// Deduplicated subformula closure of all formulas in the given sequents,
// returned in canonical order (token size, then rendering) so that dependent
// enumerations are reproducible run to run.
std::vector<Formula> subformula_closure(std::span<const Sequent> seqs);

// Size measures over sequents and theories.
std::size_t size_sum(std::span<const Sequent> seqs);
std::size_t size_max(std::span<const Sequent> seqs);

// Sequent-to-formula translation: antecedent folded by fusion, divided under
// the succedent (an empty succedent translates as the additive zero).
// Requires Fuse, Under, One and Zero as needed; throws MissingConnective.
Formula translate_sequent(const Sequent& s, Fragment frag);

// Theory translation: each sequent t becomes the axiom |- translate(t).
Theory translate_theory(const Theory& t, Fragment frag);

// Keeps exactly the names in `keep`, preserving order of `names`.
std::vector<std::string> restrict_to(std::span<const std::string> names,
                                     std::span<const std::string> keep);

} // namespace flw
