// Forward saturation over a fixed formula alphabet: computes the minimal
// elements (under sequent embedding) of the deducible sequents of a regular
// theory, round by round, with per-element provenance, admission budgets,
// deduction reconstruction, an exhaustive bounded-closure cross-check, and
// certified norm envelopes for every admission.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flw/derivation.hpp"
#include "flw/order.hpp"
#include "flw/rules.hpp"
#include "flw/sequent.hpp"

namespace flw {

struct SaturationConfig {
  enum class Engine : std::uint8_t { Anchored, Literal };
  Engine engine = Engine::Anchored;
  std::size_t literal_bound = 4; // norm ceiling for Engine::Literal rounds
  double time_budget_s = 60.0;
  std::uint64_t frontier_budget = 1'000'000; // total admissions allowed
  bool record_provenance = true;
};

struct Provenance {
  enum class Kind : std::uint8_t { Axiom, Theory, Step };
  Kind kind = Kind::Theory;
  std::string rule;                  // Axiom and Step
  std::optional<Substitution> subst; // Axiom only
  // Step: for each premise, the admitted element it covers and the full
  // premise instance of the rule application.
  std::vector<std::pair<std::size_t, Sequent>> premises;
};

struct SaturationStats {
  std::size_t iterations = 0; // last round index that admitted anything
  std::size_t frontier_size = 0;
  std::size_t max_norm = 0; // over everything ever admitted
  std::vector<std::size_t> admissions_per_round; // index 0 = initial batch
  std::size_t evictions = 0;
  double wall_ms = 0.0;
};

struct SaturationState {
  Calculus calculus;
  Theory theory;
  std::vector<Formula> alphabet; // canonical order, duplicate-free

  std::vector<Sequent> admitted;           // append-only admission log
  std::vector<Provenance> provenance;      // parallel to admitted (may be empty)
  std::vector<std::size_t> admitted_round; // parallel to admitted
  std::vector<std::size_t> frontier;       // admitted indices, currently minimal
  SaturationStats stats;

  bool subsumes(const Sequent& goal) const;
  std::optional<std::size_t> witness(const Sequent& goal) const; // admitted index
  std::vector<Sequent> frontier_sequents() const;                // canonical order
  std::vector<Sequent> frontier_after_round(std::size_t round) const;
};

// Initial batch only: minimal elements of the theory plus all alphabet
// instances of the axiom schemas, in canonical order. Throws NotRegular for a
// non-regular theory and InvalidInput when the alphabet misses a theory
// formula or is not closed under subformulas.
std::vector<Sequent> initial_batch(const Calculus& c, const Theory& t,
                                   std::span<const Formula> alphabet);

// Runs rounds to a full fixpoint (no early exit on any goal). Throws the same
// input errors as initial_batch, and BudgetExceeded when a budget runs out.
SaturationState saturate(const Calculus& c, const Theory& t,
                         std::span<const Formula> alphabet,
                         const SaturationConfig& cfg = {});

struct Verdict {
  bool yes = false;
  std::optional<std::size_t> witness_index = std::nullopt; // admitted index
  std::optional<std::size_t> goal_index = std::nullopt;
};

// A goal holds iff some frontier element embeds into it.
Verdict check_goals(const SaturationState& st, std::span<const Sequent> goals);

// Saturates, then tests the goal set; every goal must be an alphabet sequent.
// The state is exported through out_state when given.
Verdict decide(const Calculus& c, const Theory& t, std::span<const Formula> alphabet,
               std::span<const Sequent> goals, const SaturationConfig& cfg = {},
               SaturationState* out_state = nullptr);

// Sequent deducibility routed through single formulas: each theory sequent
// and the goal are folded into one formula (fusion of the antecedent under a
// division into the succedent), and the question becomes deducibility of the
// formula-only goal from the formula-only theory. Needs fusion, the left
// division, and both units in the fragment.
Verdict decide_via_formulas(const Calculus& c, const Theory& t,
                            std::span<const Sequent> goals,
                            const SaturationConfig& cfg = {},
                            SaturationState* out_state = nullptr);

// Rebuilds a checker-valid deduction of `goal` from the provenance log. With
// standardize (builtin calculi only) the result is passed through cut
// normalization, so every remaining cut sits on a theory leaf.
Derivation reconstruct_deduction(const SaturationState& st, const Sequent& goal,
                                 bool standardize = true);

// Exhaustive cross-check: the set of alphabet sequents with antecedent length
// at most cap deducible through alphabet sequents only, computed by plain
// fixpoint induction over the whole bounded universe. Axioms with sequence
// metavariables and rules with premise-only sequence metavariables are
// rejected (InvalidInput); returns canonically sorted sequents.
std::vector<Sequent> bounded_closure_oracle(const Calculus& c, const Theory& t,
                                            std::span<const Formula> alphabet,
                                            std::size_t cap,
                                            std::uint64_t budget = 200'000'000);

struct BoundsReport {
  std::size_t goals_checked = 0;
  std::size_t admissions_checked = 0;
  std::size_t trace_length = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Certified envelopes for a finished run: (a) for each goal, the subformula
// closure of theory-plus-goal stays within the token sizes; (b) each round-i
// admission has norm below (size_sum(T)+1) * size(R)^(2i+1); (c) the norms of
// the canonically least admission of each round form a controlled trace for
// g(x) = size(R)^2 * x and n = (size_sum(T)+1) * size(R). With strict set,
// any violation raises InternalInvariantViolated.
BoundsReport bounds_report(const SaturationState& st, std::span<const Sequent> goals,
                           bool strict = true);

} // namespace flw
