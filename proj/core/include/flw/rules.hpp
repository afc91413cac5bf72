// Inference-rule schemas: pattern sequents over sequence / formula /
// propositional-variable / succedent metavariables, the builtin calculus per
// fragment, user-supplied structural rules, and instance matching.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flw/sequent.hpp"

namespace flw {

// Pattern formula: like Formula but leaves may be metavariables. FmVar ranges
// over arbitrary formulas, PropVar only over propositional variables.
class PatFormula {
public:
  enum class Kind : std::uint8_t { FmVar, PropVar, Const, Bin };

  PatFormula() = default;
  static PatFormula fmvar(std::string name);
  static PatFormula propvar(std::string name);
  static PatFormula constant(Conn c);
  static PatFormula bin(Conn c, PatFormula l, PatFormula r);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& name() const;
  Conn conn() const;
  const PatFormula& left() const;
  const PatFormula& right() const;

  std::size_t size_tokens() const;
  std::string to_string() const;
  bool mentions_connective() const; // any Const or Bin node present

private:
  struct Node; // completed below, after PatFormula itself is complete
  std::shared_ptr<const Node> node_;
};

struct PatFormula::Node {
  Kind kind;
  Conn conn;
  std::string name;
  PatFormula left, right;
};

inline PatFormula::Kind PatFormula::kind() const { return node_->kind; }
inline const std::string& PatFormula::name() const { return node_->name; }
inline Conn PatFormula::conn() const { return node_->conn; }
inline const PatFormula& PatFormula::left() const { return node_->left; }
inline const PatFormula& PatFormula::right() const { return node_->right; }

// One slot of a pattern antecedent: either a sequence metavariable (matching
// zero or more formulas) or a pattern formula (matching exactly one).
struct PatItem {
  enum class Kind : std::uint8_t { SeqVar, Fm };
  Kind kind = Kind::SeqVar;
  std::string seqvar;
  PatFormula fm;

  static PatItem seq(std::string name) { return {Kind::SeqVar, std::move(name), {}}; }
  static PatItem formula(PatFormula f) { return {Kind::Fm, "", std::move(f)}; }
};

struct SequentPattern {
  std::vector<PatItem> antecedent;
  enum class Succ : std::uint8_t { Empty, Var, Fm };
  Succ succ_kind = Succ::Empty;
  std::string succ_var; // for Succ::Var; binds to a formula or to the empty side
  PatFormula succ_fm;   // for Succ::Fm

  std::size_t size_tokens() const;
  std::string to_string() const;
};

struct RuleSchema {
  std::string name;   // unique key, used in derivation files and reports
  std::string family; // rules that differ only in a premise choice share this
  std::vector<SequentPattern> premises;
  SequentPattern conclusion;

  bool is_axiom() const { return premises.empty(); }
  std::size_t size_tokens() const; // premises + conclusion + separator tokens
  std::string to_string() const;
};

struct Calculus {
  Fragment frag;
  std::vector<RuleSchema> rules;
  bool has_user_rules = false;

  const RuleSchema* find(const std::string& name) const;
  std::size_t size_tokens() const;   // sum of rule token counts
  std::size_t family_count() const;  // distinct family names
};

// The calculus for a fragment: identity/weakening/cut always, plus the left
// and right rules of exactly the selected constants and connectives.
Calculus builtin_calculus(Fragment frag);

// Adds a user rule after checking it is purely structural (metavariables
// only). Throws NotStructural otherwise, InvalidInput on a name clash.
Calculus add_structural_rule(const Calculus& c, const RuleSchema& r);

// Text format: "rule NAME: P1 ; P2 => C" where each pattern sequent uses
// G<digits> for sequence metavariables, single letters A..F for formula
// metavariables, and P? (identifier + '?') for an optional-succedent
// metavariable. Constants and connectives are rejected (NotStructural).
RuleSchema parse_rule_schema(const std::string& line);

struct Substitution {
  std::map<std::string, std::vector<Formula>> seq;
  std::map<std::string, Formula> fm;
  std::map<std::string, Formula> prop; // values are variable formulas
  std::map<std::string, std::optional<Formula>> succ;

  std::string to_string() const;
};

// Instantiates a pattern under a total substitution; an unbound metavariable
// is a caller bug and raises InternalInvariantViolated.
Sequent instantiate(const SequentPattern& p, const Substitution& sub);

// Enumerates extensions of `sub` matching pattern p against sequent s, calling
// `yield` for each complete match; stops early when yield returns true.
// Returns whether any yield returned true. `sub` is restored on return.
bool match_pattern(const SequentPattern& p, const Sequent& s, Substitution& sub,
                   const std::function<bool(Substitution&)>& yield);

// First substitution making every rule premise/conclusion pattern match the
// given sequents simultaneously, if any.
std::optional<Substitution> match_instance(const RuleSchema& r,
                                           std::span<const Sequent> premises,
                                           const Sequent& conclusion);

// Formula metavariables occurring in some premise but not in the conclusion
// (for the builtin rules: exactly the cut formula of "cut").
std::vector<std::string> premise_only_fm_metavars(const RuleSchema& r);

} // namespace flw
