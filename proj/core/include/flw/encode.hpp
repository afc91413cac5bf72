// Channel-system-to-sequent reduction: a fixed vocabulary of propositional
// variables per system, the theory capturing its instructions, configuration
// encodings and goals, a compiler turning computations into checkable
// deductions, and a structural-property suite for saturation frontiers
// produced from such theories.
#pragma once

#include <span>

#include "flw/derivation.hpp"
#include "flw/lcs.hpp"
#include "flw/sequent.hpp"

namespace flw {

struct LcsVocabulary {
  std::vector<std::string> state_vars;    // indexed like ChannelSystem::states
  std::vector<std::string> start_markers; // per channel, 1-based "s<k>"
  std::vector<std::string> end_markers;   // per channel, 1-based "e<k>"
  std::vector<std::string> letter_vars;   // indexed like ChannelSystem::letters

  std::vector<std::string> all() const;
  bool is_state_var(const std::string& name) const;
  // Channel index (0-based) when name is a start/end marker.
  std::optional<std::size_t> start_channel(const std::string& name) const;
  std::optional<std::size_t> end_channel(const std::string& name) const;
  bool is_letter_var(const std::string& name) const;
};

// Derives variable names: state q<digits> becomes Q<digits> (otherwise
// Q_<name>), channel k gets markers s<k>/e<k> in declared order, a
// single-lowercase-letter becomes its uppercase (otherwise A_<letter>).
// Throws InvalidInput if the derived names collide.
LcsVocabulary vocabulary_of(const ChannelSystem& cs);

// The theory of a system: one sequent per write instruction, one per read
// instruction, and the state-variable commutation sequents (two per state
// variable and non-state variable pair).
Theory theory_of(const ChannelSystem& cs);

// The variable sequence [state, s1, letters..., e1, s2, ..., em].
std::vector<Formula> encode_conf(const ChannelSystem& cs, const Configuration& u);

// Canonical goal: encode_conf(u) |- fused encode_conf(v).
Sequent encode_problem(const ChannelSystem& cs, const Configuration& u,
                       const Configuration& v);

// All goals obtained by placing u's state variable at each antecedent
// position (the canonical goal included); exactly norm(canonical) many.
std::vector<Sequent> commuted_encodings(const ChannelSystem& cs, const Configuration& u,
                                        const Configuration& v);

struct EncodedInstance {
  Theory theory;
  Sequent canonical_goal;
  std::vector<Sequent> commuted_goals;
  LcsVocabulary vocabulary;
};

EncodedInstance reduce(const ChannelSystem& cs, const Configuration& u,
                       const Configuration& v);

struct TraceStep {
  enum class Kind : std::uint8_t { Perfect, Lossy };
  Kind kind = Kind::Perfect;
  std::size_t instr = 0; // Perfect: index into ChannelSystem::instrs
  std::size_t chan = 0;  // Lossy: channel of the lost letter
  std::size_t pos = 0;   // Lossy: position of the lost letter in that word

  static TraceStep perfect(std::size_t i) { return {Kind::Perfect, i, 0, 0}; }
  static TraceStep lossy(std::size_t chan, std::size_t pos) {
    return {Kind::Lossy, 0, chan, pos};
  }
};

// Replays the steps from u (InvalidTrace if any step does not apply) and
// builds a deduction of the canonical goal for the final configuration; the
// result is valid with every cut anchored on a theory leaf.
Derivation compile_computation(const ChannelSystem& cs, const Configuration& u,
                               std::span<const TraceStep> steps);

struct LemmaReport {
  std::uint64_t checked = 0;
  std::vector<std::pair<Sequent, std::string>> violations;
  bool ok() const { return violations.empty(); }
};

// Structural facts that hold of every sequent a saturation run can derive
// from a channel-system theory: (1) the succedent is nonempty; (2) without
// state variables in the antecedent, the succedent's letters form a subword
// of the antecedent's; (3) a succedent shaped like part of a configuration
// encoding only mentions channel markers the antecedent also has; (4) a
// succedent starting with a state variable needs one in the antecedent.
LemmaReport lemma_property_suite(const ChannelSystem& cs, std::span<const Sequent> seqs);

} // namespace flw
