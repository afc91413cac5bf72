// Seeded random channel-system instances plus the four-way cross-check
// (bounded search, exact coverability, saturation over the encoded theory,
// and proof compilation) shared by the xcheck command and the test suites.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "flw/encode.hpp"
#include "flw/lcs.hpp"
#include "flw/saturate.hpp"

namespace flw::harness {

struct LcsCaps {
  std::size_t max_states = 3;
  std::size_t max_channels = 2;
  std::size_t max_letters = 2;
  std::size_t max_instrs = 4;
  std::size_t max_word = 2;
};

// Engine-independent draw so seeds mean the same thing everywhere.
inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline ChannelSystem random_lcs(std::mt19937_64& rng, const LcsCaps& caps) {
  ChannelSystem cs;
  std::size_t ns = pick(rng, 1, caps.max_states);
  std::size_t nc = pick(rng, 1, caps.max_channels);
  std::size_t nl = pick(rng, 1, caps.max_letters);
  std::size_t ni = pick(rng, 1, caps.max_instrs);
  for (std::size_t i = 0; i < ns; ++i) cs.states.push_back("q" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nc; ++i) cs.channels.push_back("c" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nl; ++i)
    cs.letters.push_back(std::string(1, static_cast<char>('a' + i)));
  for (std::size_t i = 0; i < ni; ++i) {
    ChannelSystem::Instr in;
    in.state = pick(rng, 0, ns - 1);
    in.chan = pick(rng, 0, nc - 1);
    in.letter = pick(rng, 0, nl - 1);
    in.is_write = (rng() % 2) == 0;
    in.next = pick(rng, 0, ns - 1);
    cs.instrs.push_back(in);
  }
  return cs;
}

inline Configuration random_conf(std::mt19937_64& rng, const ChannelSystem& cs,
                                 std::size_t max_word) {
  Configuration c;
  c.state = pick(rng, 0, cs.states.size() - 1);
  c.words.resize(cs.channels.size());
  for (auto& w : c.words) {
    std::size_t len = pick(rng, 0, max_word);
    for (std::size_t i = 0; i < len; ++i)
      w.push_back(pick(rng, 0, cs.letters.size() - 1));
  }
  return c;
}

// Breadth-first search for a lossy run from u ending exactly at v with every
// intermediate word within cap; returns the step list on success.
inline std::optional<std::vector<TraceStep>> find_trace(const ChannelSystem& cs,
                                                        const Configuration& u,
                                                        const Configuration& v,
                                                        std::size_t cap,
                                                        std::uint64_t node_budget = 200000) {
  if (u.max_word() > cap) return std::nullopt;
  struct Pred {
    std::size_t parent;
    TraceStep step;
  };
  std::vector<Configuration> nodes{u};
  std::vector<Pred> preds{{0, TraceStep{}}};
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> seen;
  seen.emplace(u, 0);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    Configuration cur = nodes[head];
    if (cur == v) {
      std::vector<TraceStep> steps;
      for (std::size_t at = head; at != 0; at = preds[at].parent)
        steps.push_back(preds[at].step);
      std::reverse(steps.begin(), steps.end());
      return steps;
    }
    if (nodes.size() > node_budget) return std::nullopt;
    auto visit = [&](Configuration succ, TraceStep step) {
      if (succ.max_word() > cap) return;
      if (seen.count(succ)) return;
      seen.emplace(succ, nodes.size());
      preds.push_back({head, step});
      nodes.push_back(std::move(succ));
    };
    for (auto& [succ, idx] : step_perfect(cs, cur)) visit(succ, TraceStep::perfect(idx));
    for (std::size_t ch = 0; ch < cur.words.size(); ++ch)
      for (std::size_t p = 0; p < cur.words[ch].size(); ++p) {
        Configuration succ = cur;
        succ.words[ch].erase(succ.words[ch].begin() + static_cast<std::ptrdiff_t>(p));
        visit(std::move(succ), TraceStep::lossy(ch, p));
      }
  }
  return std::nullopt;
}

// Instances this small keep the encoded saturation affordable.
inline bool saturation_sized(const ChannelSystem& cs) {
  return cs.channels.size() == 1 && cs.letters.size() == 1 && cs.states.size() <= 2 &&
         cs.instrs.size() <= 2;
}

struct FourwayOutcome {
  BoundedReach bounded = BoundedReach::NoWithinCap;
  bool exact = false;
  std::optional<bool> decided; // saturation over the encoding, when attempted
  bool trace_found = false;
  bool compiled_ok = true;
  bool budget_exceeded = false;
  std::vector<std::string> problems; // any entry is a cross-check failure
};

inline FourwayOutcome fourway_check(const ChannelSystem& cs, const Configuration& u,
                                    const Configuration& v, std::size_t cap,
                                    const SaturationConfig& scfg,
                                    bool force_decide = false) {
  FourwayOutcome out;
  try {
    out.bounded = reach_bounded(cs, u, v, cap);
    out.exact = reach_exact(cs, u, v);
    if (out.bounded == BoundedReach::Yes && !out.exact)
      out.problems.push_back("bounded search says yes but exact coverability says no");
    if (force_decide || saturation_sized(cs)) {
      EncodedInstance inst = reduce(cs, u, v);
      std::vector<Sequent> pool = inst.theory;
      pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
      std::vector<Formula> phi = subformula_closure(pool);
      Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
      Verdict vd = decide(calc, inst.theory, phi, inst.commuted_goals, scfg);
      out.decided = vd.yes;
      if (vd.yes != out.exact)
        out.problems.push_back("saturation over the encoding disagrees with exact "
                               "coverability");
    }
    if (out.exact) {
      auto tr = find_trace(cs, u, v, cap);
      if (!tr) tr = find_trace(cs, u, v, cap + 2);
      out.trace_found = tr.has_value();
      if (tr) {
        Derivation d = compile_computation(cs, u, *tr);
        Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
        Theory th = theory_of(cs);
        CheckReport cr = check_deduction(calc, th, d);
        if (!(cr.valid && cr.standard)) {
          out.compiled_ok = false;
          out.problems.push_back("compiled computation proof failed the checker: " +
                                 cr.summary());
        }
        if (!(d.sequent == encode_problem(cs, u, v))) {
          out.compiled_ok = false;
          out.problems.push_back("compiled computation proof has the wrong end sequent");
        }
      }
    }
  } catch (const BudgetExceeded&) {
    out.budget_exceeded = true;
  }
  return out;
}

} // namespace flw::harness
