// Finite-control machines over unbounded FIFO channels whose letters may be
// lost: the step relations (perfect and single-loss), configuration
// embedding, bounded forward search, exact backward coverability, and a
// probe that cross-validates the two step-discipline readings.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flw/errors.hpp"

namespace flw {

struct ChannelSystem {
  std::vector<std::string> states;
  std::vector<std::string> channels;
  std::vector<std::string> letters;

  struct Instr {
    std::size_t state;  // source control state
    std::size_t chan;
    std::size_t letter;
    bool is_write;      // true: append letter; false: consume it from the head
    std::size_t next;   // target control state
  };
  std::vector<Instr> instrs;

  std::size_t state_index(const std::string& name) const;
  std::size_t channel_index(const std::string& name) const;
  std::size_t letter_index(const std::string& name) const;
};

struct Configuration {
  std::size_t state = 0;
  std::vector<std::vector<std::size_t>> words; // letter indices per channel

  bool operator==(const Configuration&) const = default;
  std::size_t hash() const;
  std::size_t total_letters() const;
  std::size_t max_word() const;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

// c1 embeds into c2: same control state, channelwise subword embedding.
bool config_embed(const Configuration& c1, const Configuration& c2);

// Text format. System files:
//   states: q1 q2        channels: c1 c2        alphabet: a b
//   q1 c1 a ? q2         (read)                 q1 c2 b ! q1   (write)
// '#' starts a comment. Configurations: "q1 : a a ; b" (channel words in
// declared order, ';'-separated, possibly empty).
ChannelSystem parse_lcs(const std::string& text);
Configuration parse_config(const ChannelSystem& cs, const std::string& text);
std::string print_config(const ChannelSystem& cs, const Configuration& c);

// All perfect-step successors, tagged with the instruction index used.
std::vector<std::pair<Configuration, std::size_t>> step_perfect(const ChannelSystem& cs,
                                                                const Configuration& c);
// All single-letter-loss successors (state unchanged).
std::vector<Configuration> step_lossy(const Configuration& c);

enum class BoundedReach { Yes, NoWithinCap };

// Forward search from u under perfect + single-loss steps, discarding any
// successor whose longest channel word exceeds cap. Yes means v is covered
// (and hence, losses being downward-closed, exactly reachable).
BoundedReach reach_bounded(const ChannelSystem& cs, const Configuration& u,
                           const Configuration& v, std::size_t cap,
                           std::uint64_t node_budget = 1'000'000);

// Exact decision by backward coverability: saturates the antichain of minimal
// configurations from which v is coverable and tests whether it reaches u.
bool reach_exact(const ChannelSystem& cs, const Configuration& u, const Configuration& v,
                 std::uint64_t basis_budget = 1'000'000);

// Computes the cap-bounded reachable set twice — freely interleaved steps
// versus loss-closure alternated with perfect steps — and reports whether the
// two sets coincide (they must).
bool semantics_equivalence_probe(const ChannelSystem& cs, const Configuration& u,
                                 std::size_t cap, std::uint64_t node_budget = 1'000'000);

} // namespace flw
