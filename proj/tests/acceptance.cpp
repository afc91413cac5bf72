// End-to-end acceptance gates: ten numbered criteria, each printing a single
// pass/fail line.  Every forbidden outcome is asserted; nothing is skipped
// silently (replaced instances are counted and reported).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "flw/derivation.hpp"
#include "flw/encode.hpp"
#include "flw/lcs.hpp"
#include "flw/order.hpp"
#include "flw/saturate.hpp"
#include "flw/sequent.hpp"
#include "xcheck_harness.hpp"

namespace {

using namespace flw;
using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict_line(int n, bool ok, const std::string& detail) {
  std::printf("[criterion %d] %s - %s\n", n, ok ? "pass" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

// Cross-criterion evidence accumulated in declaration order.
struct Tally {
  std::size_t bounds_runs = 0;
  std::size_t bounds_violations = 0;
  std::size_t lemma_runs = 0;
  std::size_t lemma_violations = 0;
};
Tally tally;

bool bounds_ok(const SaturationState& st, std::span<const Sequent> goals) {
  BoundsReport rep = bounds_report(st, goals, false);
  ++tally.bounds_runs;
  tally.bounds_violations += rep.violations.size();
  return rep.ok();
}

const char* kIntroLcs = R"(states: q1 q2
channels: c1 c2
alphabet: a b
q1 c1 a ? q2
)";

const char* kOneChanLcs = R"(states: q1 q2
channels: c1
alphabet: a
q1 c1 a ? q2
q2 c1 a ! q2
)";

// --- random fusion-fragment micro instances -------------------------------

struct Micro {
  Theory theory;
  Sequent goal;
  std::vector<Formula> phi; // subformula closure of theory + goal, |phi| <= 5
};

Micro random_micro(std::mt19937_64& rng) {
  static const char* names[] = {"p", "q", "r"};
  std::size_t na = pick(rng, 2, 3);
  std::vector<Formula> atoms;
  for (std::size_t i = 0; i < na; ++i) atoms.push_back(Formula::var(names[i]));
  std::vector<Formula> pool = atoms;
  std::size_t nf = pick(rng, 0, 2);
  for (std::size_t i = 0; i < nf; ++i) {
    Formula f = Formula::bin(Conn::Fuse, atoms[pick(rng, 0, na - 1)],
                             atoms[pick(rng, 0, na - 1)]);
    if (std::find(pool.begin(), pool.end(), f) == pool.end()) pool.push_back(f);
  }
  auto atom = [&] { return atoms[pick(rng, 0, na - 1)]; };
  auto any = [&] { return pool[pick(rng, 0, pool.size() - 1)]; };

  Micro m;
  std::size_t nt = pick(rng, 1, 3);
  for (std::size_t i = 0; i < nt; ++i) {
    Sequent s;
    std::size_t len = pick(rng, 1, 2);
    for (std::size_t k = 0; k < len; ++k) s.antecedent.push_back(atom());
    if (pool.size() > na && rng() % 4 == 0)
      s.succedent = pool[pick(rng, na, pool.size() - 1)];
    else
      s.succedent = atom();
    m.theory.push_back(s);
  }
  Sequent g;
  std::size_t glen = (rng() % 10 == 0) ? 0 : pick(rng, 1, 3);
  for (std::size_t k = 0; k < glen; ++k) g.antecedent.push_back(any());
  if (rng() % 10 != 0) g.succedent = (rng() % 3 == 0) ? any() : atom();
  m.goal = g;

  std::vector<Sequent> all = m.theory;
  all.push_back(g);
  m.phi = subformula_closure(all);
  return m;
}

// Largest closure cap whose enumerated sequent universe stays desk-sized.
std::size_t cap_ceiling(std::size_t phi_size) {
  if (phi_size <= 3) return 9;
  if (phi_size == 4) return 7;
  return 6;
}

// Stabilized bounded-closure membership: the answer once two consecutive caps
// agree, together with the cap that sufficed.  nullopt when the ceiling is hit
// before stabilizing.
std::optional<bool> oracle_answer(const Calculus& c, const Theory& t,
                                  std::span<const Formula> phi, const Sequent& goal,
                                  std::size_t start_cap, std::size_t ceiling,
                                  std::size_t* used_cap) {
  auto member_at = [&](std::size_t cap) {
    std::vector<Sequent> closed = bounded_closure_oracle(c, t, phi, cap);
    return std::binary_search(closed.begin(), closed.end(), goal,
                              Sequent::canonical_less);
  };
  std::size_t cap = std::min(start_cap, ceiling - 1);
  bool prev = member_at(cap);
  while (cap + 1 <= ceiling) {
    bool next = member_at(cap + 1);
    if (next == prev) {
      if (used_cap) *used_cap = cap;
      return prev;
    }
    prev = next;
    ++cap;
  }
  return std::nullopt;
}

// --- insertion BFS used as the independent embedding decision --------------

std::string word_key(const std::vector<Formula>& w) {
  std::string k;
  for (const Formula& f : w) {
    k += f.to_string();
    k += '\x1f';
  }
  return k;
}

bool insertion_reachable(const Sequent& a, const Sequent& b,
                         std::span<const Formula> phi) {
  if (a.succedent != b.succedent) return false;
  if (a.antecedent.size() > b.antecedent.size()) return false;
  if (a.antecedent == b.antecedent) return true;
  std::vector<std::vector<Formula>> q{a.antecedent};
  std::set<std::string> seen{word_key(a.antecedent)};
  for (std::size_t head = 0; head < q.size(); ++head) {
    std::vector<Formula> w = q[head];
    if (w.size() >= b.antecedent.size()) continue;
    for (std::size_t pos = 0; pos <= w.size(); ++pos)
      for (const Formula& f : phi) {
        std::vector<Formula> w2 = w;
        w2.insert(w2.begin() + static_cast<std::ptrdiff_t>(pos), f);
        if (w2 == b.antecedent) return true;
        if (w2.size() < b.antecedent.size() && seen.insert(word_key(w2)).second)
          q.push_back(std::move(w2));
      }
  }
  return false;
}

} // namespace

TEST_CASE("criterion 1: worked single-read instance end to end") {
  bool ok = false;
  std::string detail;
  try {
    auto t0 = Clock::now();
    ChannelSystem cs = parse_lcs(kIntroLcs);
    Configuration u = parse_config(cs, "q1 : a a ; b");
    Configuration v = parse_config(cs, "q2 : a ; b");

    Sequent canonical = encode_problem(cs, u, v);
    bool enc_ok = canonical.to_string() ==
                  "Q1,s1,A,A,e1,s2,B,e2 |- Q2*(s1*(A*(e1*(s2*(B*e2)))))";

    bool reach_ok = reach_exact(cs, u, v);

    std::vector<TraceStep> steps = {TraceStep::perfect(0)};
    Derivation d = compile_computation(cs, u, steps);
    Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
    CheckReport cr = check_deduction(calc, theory_of(cs), d);
    bool compile_ok = cr.valid && cr.standard && d.sequent == canonical;

    double el = secs(t0);
    ok = enc_ok && reach_ok && compile_ok && el < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "encoding %s, reachability %s, compiled proof %s, %.3f s",
                  enc_ok ? "exact" : "WRONG", reach_ok ? "yes" : "NO",
                  compile_ok ? "checked" : "REJECTED", el);
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(1, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 2: seeded channel systems, four-way agreement") {
  bool ok = false;
  std::string detail;
  try {
    auto t0 = Clock::now();
    std::mt19937_64 rng(0xA202);
    harness::LcsCaps caps; // 3 states, 2 channels, 2 letters, 4 instrs, words <= 2
    SaturationConfig scfg;
    scfg.time_budget_s = 120.0;

    int total = 0, sat_runs = 0, replaced = 0, bounded_yes = 0, exact_yes = 0;
    int sat_yes = 0;
    bool agree = true;
    std::string first_problem;
    int guard = 0;
    while ((total < 50 || sat_runs < 10) && guard < 600 && agree) {
      ++guard;
      ChannelSystem cs = harness::random_lcs(rng, caps);
      Configuration u = harness::random_conf(rng, cs, caps.max_word);
      Configuration v = harness::random_conf(rng, cs, caps.max_word);
      if (total >= 50 && !harness::saturation_sized(cs)) continue;

      harness::FourwayOutcome out = harness::fourway_check(cs, u, v, 4, scfg, false);
      if (out.budget_exceeded) {
        ++replaced;
        continue;
      }
      if (!out.problems.empty()) {
        agree = false;
        first_problem = out.problems.front();
      }
      ++total;
      if (out.bounded == BoundedReach::Yes) ++bounded_yes;
      if (out.exact) ++exact_yes;

      if (out.decided.has_value()) {
        ++sat_runs;
        if (*out.decided) ++sat_yes;
        // Re-run with the state exposed so the norm envelopes and the
        // structural suite can inspect the frontier.
        EncodedInstance inst = reduce(cs, u, v);
        std::vector<Sequent> pool = inst.theory;
        pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
        std::vector<Formula> phi = subformula_closure(pool);
        Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
        SaturationState st;
        decide(calc, inst.theory, phi, inst.commuted_goals, scfg, &st);
        if (!bounds_ok(st, inst.commuted_goals)) {
          agree = false;
          first_problem = "norm envelope violated on an encoded run";
        }
        std::vector<Sequent> frontier = st.frontier_sequents();
        LemmaReport lr = lemma_property_suite(cs, frontier);
        ++tally.lemma_runs;
        tally.lemma_violations += lr.violations.size();
        if (!lr.ok()) {
          agree = false;
          first_problem = "structural suite flagged a frontier: " +
                          lr.violations.front().second;
        }
      }
    }
    double el = secs(t0);
    ok = agree && total >= 50 && sat_runs >= 10 && el < 600.0;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "%d instances (%d bounded-yes, %d exact-yes), %d saturation runs "
                  "(%d yes), %d replaced on budget, %.1f s%s%s",
                  total, bounded_yes, exact_yes, sat_runs, sat_yes, replaced, el,
                  agree ? "" : "; ", agree ? "" : first_problem.c_str());
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(2, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 3: micro instances against the bounded-closure oracle") {
  bool ok = false;
  std::string detail;
  try {
    std::mt19937_64 rng(0xA303);
    Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
    SaturationConfig cfg;

    int done = 0, yes_count = 0, replaced = 0;
    std::size_t max_cap_used = 0;
    bool agree = true;
    std::string first_problem;
    int guard = 0;
    while (done < 100 && guard < 400 && agree) {
      ++guard;
      Micro m = random_micro(rng);
      std::vector<Sequent> goals{m.goal};

      SaturationState st;
      Verdict vd;
      try {
        vd = decide(calc, m.theory, m.phi, goals, cfg, &st);
      } catch (const BudgetExceeded&) {
        ++replaced;
        continue;
      }
      if (!bounds_ok(st, goals)) {
        agree = false;
        first_problem = "norm envelope violated on " + m.goal.to_string();
        break;
      }

      std::size_t start = std::max<std::size_t>(
          {4, norm(m.goal) + 2, st.stats.max_norm + 2});
      std::size_t ceiling = cap_ceiling(m.phi.size());
      std::size_t used = 0;
      std::optional<bool> oans;
      try {
        oans = oracle_answer(calc, m.theory, m.phi, m.goal, start, ceiling, &used);
      } catch (const BudgetExceeded&) {
        ++replaced;
        continue;
      }
      if (!oans) {
        ++replaced;
        continue;
      }
      max_cap_used = std::max(max_cap_used, used);

      if (vd.yes != *oans) {
        agree = false;
        first_problem = "engine says " + std::string(vd.yes ? "yes" : "no") +
                        ", oracle says " + std::string(*oans ? "yes" : "no") +
                        " for " + m.goal.to_string();
        break;
      }
      if (vd.yes) {
        ++yes_count;
        Derivation d = reconstruct_deduction(st, m.goal, true);
        CheckReport cr = check_deduction(calc, m.theory, d);
        if (!(cr.valid && cr.standard)) {
          agree = false;
          first_problem = "reconstructed proof rejected for " + m.goal.to_string();
          break;
        }
      }
      ++done;
    }
    ok = agree && done >= 100 && yes_count >= 5 && (done - yes_count) >= 5;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "%d instances (%d yes / %d no), sufficient cap <= %zu, %d "
                  "replaced%s%s",
                  done, yes_count, done - yes_count, max_cap_used, replaced,
                  agree ? "" : "; ", agree ? "" : first_problem.c_str());
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(3, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 4: anchored and literal engines reach the same frontier") {
  bool ok = false;
  std::string detail;
  try {
    std::mt19937_64 rng(0xA404);
    Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
    int done = 0, skipped_norm = 0;
    bool agree = true;
    std::string first_problem;
    int guard = 0;
    while (done < 20 && guard < 200 && agree) {
      ++guard;
      Micro m = random_micro(rng);
      SaturationConfig ac;
      SaturationState ast;
      try {
        ast = saturate(calc, m.theory, m.phi, ac);
      } catch (const BudgetExceeded&) {
        continue;
      }
      if (ast.stats.max_norm > 4) {
        ++skipped_norm; // outside the literal engine's published bound
        continue;
      }
      SaturationConfig lc;
      lc.engine = SaturationConfig::Engine::Literal;
      lc.literal_bound = 4;
      SaturationState lst = saturate(calc, m.theory, m.phi, lc);
      if (ast.frontier_sequents() != lst.frontier_sequents()) {
        agree = false;
        first_problem = "frontiers differ on a theory of " +
                        std::to_string(m.theory.size()) + " sequents";
      }
      if (!bounds_ok(ast, {})) agree = false;
      ++done;
    }
    ok = agree && done >= 20;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%d instances, %d beyond the literal bound%s%s",
                  done, skipped_norm, agree ? "" : "; ",
                  agree ? "" : first_problem.c_str());
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(4, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 5: norm envelopes hold on every saturation run") {
  bool ok = false;
  std::string detail;
  try {
    // Dedicated strict runs on top of everything accumulated so far.
    Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
    std::mt19937_64 rng(0xA505);
    bool strict_ok = true;
    for (int i = 0; i < 3 && strict_ok; ++i) {
      Micro m = random_micro(rng);
      std::vector<Sequent> goals{m.goal};
      SaturationState st;
      decide(calc, m.theory, m.phi, goals, {}, &st);
      bounds_report(st, goals, true); // throws on any violation
      if (!bounds_ok(st, goals)) strict_ok = false;
    }
    {
      ChannelSystem cs = parse_lcs(kOneChanLcs);
      Configuration u = parse_config(cs, "q1 : a a");
      Configuration v = parse_config(cs, "q2 : a");
      EncodedInstance inst = reduce(cs, u, v);
      std::vector<Sequent> pool = inst.theory;
      pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
      std::vector<Formula> phi = subformula_closure(pool);
      SaturationState st;
      decide(calc, inst.theory, phi, inst.commuted_goals, {}, &st);
      bounds_report(st, inst.commuted_goals, true);
      if (!bounds_ok(st, inst.commuted_goals)) strict_ok = false;
    }
    ok = strict_ok && tally.bounds_runs > 0 && tally.bounds_violations == 0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu runs checked, %zu violations",
                  tally.bounds_runs, tally.bounds_violations);
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(5, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 6: structural suite on encoded frontiers, mutants caught") {
  bool ok = false;
  std::string detail;
  try {
    ChannelSystem cs = parse_lcs(kOneChanLcs);
    std::vector<Sequent> mutants = {
        parse_sequent("A |-"),
        parse_sequent("A |- A*A"),
        parse_sequent("A |- s1*e1"),
        parse_sequent("A,A |- Q1*A"),
    };
    LemmaReport rep = lemma_property_suite(cs, mutants);
    std::set<std::string> flagged;
    for (const auto& [s, why] : rep.violations) flagged.insert(s.to_string());
    bool mutants_caught = flagged.size() == mutants.size();

    ok = mutants_caught && tally.lemma_runs >= 10 && tally.lemma_violations == 0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%zu frontier runs clean, %zu/%zu injected mutants flagged",
                  tally.lemma_runs, flagged.size(), mutants.size());
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(6, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 7: random deductions normalize to standard analytic form") {
  bool ok = false;
  std::string detail;
  try {
    std::mt19937_64 rng(0xA707);
    Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
    static const char* names[] = {"p", "q", "r"};

    auto id_node = [](const Formula& a) {
      Sequent s;
      s.antecedent = {a};
      s.succedent = a;
      return Derivation::rule_node("id", s, {});
    };

    int done = 0, nonstandard_before = 0;
    bool agree = true;
    std::string first_problem;
    while (done < 50 && agree) {
      Theory th;
      std::size_t nt = pick(rng, 1, 3);
      for (std::size_t i = 0; i < nt; ++i) {
        Sequent s;
        std::size_t len = pick(rng, 1, 2);
        for (std::size_t k = 0; k < len; ++k)
          s.antecedent.push_back(Formula::var(names[pick(rng, 0, 2)]));
        s.succedent = Formula::var(names[pick(rng, 0, 2)]);
        th.push_back(s);
      }

      std::vector<Derivation> pool;
      for (const Sequent& s : th) pool.push_back(Derivation::theory_leaf(s));
      for (const char* n : names) pool.push_back(id_node(Formula::var(n)));

      std::size_t nops = pick(rng, 3, 8);
      for (std::size_t op = 0; op < nops; ++op) {
        std::size_t kind = rng() % 4;
        Derivation& d = pool[pick(rng, 0, pool.size() - 1)];
        if (kind == 0) { // weaken a variable in
          Sequent s = d.sequent;
          std::size_t pos = pick(rng, 0, s.antecedent.size());
          Formula v = Formula::var(names[pick(rng, 0, 2)]);
          s.antecedent.insert(s.antecedent.begin() + static_cast<std::ptrdiff_t>(pos), v);
          pool.push_back(Derivation::rule_node("wl", s, {d}));
        } else if (kind == 1 && d.sequent.antecedent.size() >= 2) { // fuse left
          Sequent s = d.sequent;
          std::size_t i = pick(rng, 0, s.antecedent.size() - 2);
          Formula fused = Formula::bin(Conn::Fuse, s.antecedent[i], s.antecedent[i + 1]);
          s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(i),
                             s.antecedent.begin() + static_cast<std::ptrdiff_t>(i + 2));
          s.antecedent.insert(s.antecedent.begin() + static_cast<std::ptrdiff_t>(i), fused);
          pool.push_back(Derivation::rule_node("fusl", s, {d}));
        } else if (kind == 2) { // fuse right
          Derivation& d2 = pool[pick(rng, 0, pool.size() - 1)];
          Sequent s;
          s.antecedent = d.sequent.antecedent;
          s.antecedent.insert(s.antecedent.end(), d2.sequent.antecedent.begin(),
                              d2.sequent.antecedent.end());
          s.succedent = Formula::bin(Conn::Fuse, *d.sequent.succedent,
                                     *d2.sequent.succedent);
          pool.push_back(Derivation::rule_node("fusr", s, {d, d2}));
        } else if (!d.sequent.antecedent.empty()) { // cut at a variable position
          std::size_t j = pick(rng, 0, d.sequent.antecedent.size() - 1);
          Formula a = d.sequent.antecedent[j];
          std::optional<Derivation> left;
          if (a.is_var() && rng() % 2 == 0) {
            left = id_node(a);
          } else {
            for (const Derivation& cand : pool)
              if (cand.sequent.succedent && *cand.sequent.succedent == a) {
                left = cand;
                break;
              }
          }
          if (!left) continue;
          Sequent s;
          s.antecedent.assign(d.sequent.antecedent.begin(),
                              d.sequent.antecedent.begin() + static_cast<std::ptrdiff_t>(j));
          s.antecedent.insert(s.antecedent.end(), left->sequent.antecedent.begin(),
                              left->sequent.antecedent.end());
          s.antecedent.insert(s.antecedent.end(),
                              d.sequent.antecedent.begin() + static_cast<std::ptrdiff_t>(j + 1),
                              d.sequent.antecedent.end());
          s.succedent = d.sequent.succedent;
          pool.push_back(Derivation::rule_node("cut", s, {*left, d}));
        }
      }

      // Force at least one cut whose left premise is an axiom node.
      Derivation target = pool.back();
      std::optional<std::size_t> vpos;
      for (std::size_t i = 0; i < target.sequent.antecedent.size(); ++i)
        if (target.sequent.antecedent[i].is_var()) {
          vpos = i;
          break;
        }
      if (!vpos) {
        target = id_node(Formula::var("p"));
        vpos = 0;
      }
      Formula a = target.sequent.antecedent[*vpos];
      Derivation root =
          Derivation::rule_node("cut", target.sequent, {id_node(a), target});

      CheckReport before = check_deduction(calc, th, root);
      if (!before.valid) {
        agree = false;
        first_problem = "generated deduction rejected: " + before.summary();
        break;
      }
      if (!before.standard) ++nonstandard_before;

      Derivation normal = normalize_to_standard(calc, th, root);
      CheckReport after = check_deduction(calc, th, normal);
      if (!(after.valid && after.standard && after.analytic &&
            normal.sequent == root.sequent)) {
        agree = false;
        first_problem = "normalized deduction broken: " + after.summary();
        break;
      }
      ++done;
    }
    ok = agree && done >= 50 && nonstandard_before == done;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%d deductions (%d non-standard before)%s%s",
                  done, nonstandard_before, agree ? "" : "; ",
                  agree ? "" : first_problem.c_str());
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(7, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 8: adding the additive conjunction changes no answers") {
  bool ok = false;
  std::string detail;
  try {
    std::mt19937_64 rng(0xA808);
    Calculus fus = builtin_calculus(Fragment::of({Conn::Fuse}));
    Calculus fus_and = builtin_calculus(Fragment::of({Conn::Fuse, Conn::And}));
    int done = 0, yes_count = 0;
    bool agree = true;
    int guard = 0;
    while (done < 20 && guard < 100 && agree) {
      ++guard;
      Micro m = random_micro(rng);
      std::vector<Sequent> goals{m.goal};
      SaturationState s1, s2;
      Verdict v1, v2;
      try {
        v1 = decide(fus, m.theory, m.phi, goals, {}, &s1);
        v2 = decide(fus_and, m.theory, m.phi, goals, {}, &s2);
      } catch (const BudgetExceeded&) {
        continue;
      }
      if (v1.yes != v2.yes) agree = false;
      if (!bounds_ok(s1, goals) || !bounds_ok(s2, goals)) agree = false;
      if (v1.yes) ++yes_count;
      ++done;
    }
    ok = agree && done >= 20;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d instances (%d yes), fragments agree: %s",
                  done, yes_count, agree ? "true" : "FALSE");
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(8, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 9: sequent answers match the single-formula translation") {
  bool ok = false;
  std::string detail;
  try {
    std::mt19937_64 rng(0xA909);
    Calculus full = builtin_calculus(Fragment::full());
    static const char* names[] = {"p", "q", "r"};
    int done = 0, yes_count = 0;
    bool agree = true;
    int guard = 0;
    while (done < 10 && guard < 60 && agree) {
      ++guard;
      Theory th;
      std::size_t nt = pick(rng, 1, 2);
      for (std::size_t i = 0; i < nt; ++i) {
        Sequent s;
        std::size_t len = pick(rng, 1, 2);
        for (std::size_t k = 0; k < len; ++k)
          s.antecedent.push_back(Formula::var(names[pick(rng, 0, 2)]));
        s.succedent = Formula::var(names[pick(rng, 0, 2)]);
        th.push_back(s);
      }
      Sequent g;
      std::size_t glen = pick(rng, 0, 2);
      for (std::size_t k = 0; k < glen; ++k)
        g.antecedent.push_back(Formula::var(names[pick(rng, 0, 2)]));
      if (rng() % 5 != 0) g.succedent = Formula::var(names[pick(rng, 0, 2)]);
      std::vector<Sequent> goals{g};

      std::vector<Sequent> pool = th;
      pool.push_back(g);
      std::vector<Formula> phi = subformula_closure(pool);

      SaturationState s1, s2;
      Verdict direct, folded;
      try {
        direct = decide(full, th, phi, goals, {}, &s1);
        folded = decide_via_formulas(full, th, goals, {}, &s2);
      } catch (const BudgetExceeded&) {
        continue;
      }
      if (direct.yes != folded.yes) agree = false;
      Sequent tg;
      tg.succedent = translate_sequent(g, Fragment::full());
      std::vector<Sequent> tgoals{tg};
      if (!bounds_ok(s1, goals) || !bounds_ok(s2, tgoals)) agree = false;
      if (direct.yes) ++yes_count;
      ++done;
    }
    ok = agree && done >= 10;
    char buf[140];
    std::snprintf(buf, sizeof(buf), "%d instances (%d yes), translations agree: %s",
                  done, yes_count, agree ? "true" : "FALSE");
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(9, ok, detail);
  CHECK_MESSAGE(ok, detail);
}

TEST_CASE("criterion 10: ten thousand randomized order-theory checks") {
  bool ok = false;
  std::string detail;
  try {
    auto t0 = Clock::now();
    std::mt19937_64 rng(0xA101);
    std::vector<Formula> base = {Formula::var("p"), Formula::var("q"),
                                 Formula::var("r"),
                                 Formula::bin(Conn::Fuse, Formula::var("p"),
                                              Formula::var("q"))};
    SequentOrder ord(base);

    auto rand_seq = [&](std::size_t maxlen) {
      Sequent s;
      std::size_t len = rng() % (maxlen + 1);
      for (std::size_t k = 0; k < len; ++k)
        s.antecedent.push_back(ord.phi[rng() % ord.phi.size()]);
      std::size_t so = rng() % (ord.phi.size() + 1);
      if (so > 0) s.succedent = ord.phi[so - 1];
      return s;
    };
    auto delete_one = [&](Sequent s) {
      if (!s.antecedent.empty()) {
        std::size_t k = rng() % s.antecedent.size();
        s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(k));
      }
      return s;
    };

    std::uint64_t checks = 0, failures = 0;
    for (int round = 0; round < 2000; ++round) {
      Sequent s = rand_seq(5);
      ++checks;
      if (!seq_embed(s, s)) ++failures;

      Sequent s3 = rand_seq(5);
      Sequent s2 = s3;
      for (std::size_t k = rng() % 3; k > 0; --k) s2 = delete_one(s2);
      Sequent s1 = s2;
      for (std::size_t k = rng() % 3; k > 0; --k) s1 = delete_one(s1);
      checks += 3;
      if (!seq_embed(s1, s2)) ++failures;
      if (!seq_embed(s2, s3)) ++failures;
      if (!seq_embed(s1, s3)) ++failures;

      Sequent a = rand_seq(4), b = rand_seq(5);
      auto ra = reflection_map(ord, a);
      auto rb = reflection_map(ord, b);
      bool direct = seq_embed(a, b);
      bool reflected = ra.first == rb.first &&
                       subword_embed(std::span<const Formula>(ra.second),
                                     std::span<const Formula>(rb.second));
      ++checks;
      if (direct != reflected) ++failures;

      Sequent x = rand_seq(3), y = rand_seq(5);
      ++checks;
      if (seq_embed(x, y) != insertion_reachable(x, y, ord.phi)) ++failures;
    }

    for (int round = 0; round < 30; ++round) {
      std::vector<Sequent> batch;
      for (int i = 0; i < 12; ++i) batch.push_back(rand_seq(4));
      SequentAntichain a1, a2;
      for (const Sequent& s : batch) a1.insert(s);
      std::vector<Sequent> shuffled = batch;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (const Sequent& s : shuffled) a2.insert(s);
      std::multiset<std::string> m1, m2;
      for (const Sequent& s : a1.elements()) m1.insert(s.to_string());
      for (const Sequent& s : a2.elements()) m2.insert(s.to_string());
      ++checks;
      if (m1 != m2) ++failures;
    }

    double el = secs(t0);
    ok = checks >= 10000 && failures == 0 && el < 30.0;
    char buf[140];
    std::snprintf(buf, sizeof(buf), "%llu checks, %llu failures, %.2f s",
                  static_cast<unsigned long long>(checks),
                  static_cast<unsigned long long>(failures), el);
    detail = buf;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  verdict_line(10, ok, detail);
  CHECK_MESSAGE(ok, detail);
}
