#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "flw/encode.hpp"
#include "flw/errors.hpp"
#include "flw/saturate.hpp"

using namespace flw;

namespace {

const char* kIntro = R"(states: q1 q2
channels: c1 c2
alphabet: a b
q1 c1 a ? q2
)";

const char* kOneChan = R"(states: q1 q2
channels: c1
alphabet: a
q1 c1 a ? q2
q2 c1 a ! q2
)";

Theory commuted_goal_theory(const ChannelSystem& cs, const Configuration& u,
                            const Configuration& v) {
  return commuted_encodings(cs, u, v);
}

} // namespace

TEST_CASE("vocabulary naming scheme") {
  ChannelSystem cs = parse_lcs(kIntro);
  LcsVocabulary voc = vocabulary_of(cs);
  CHECK(voc.state_vars == std::vector<std::string>{"Q1", "Q2"});
  CHECK(voc.start_markers == std::vector<std::string>{"s1", "s2"});
  CHECK(voc.end_markers == std::vector<std::string>{"e1", "e2"});
  CHECK(voc.letter_vars == std::vector<std::string>{"A", "B"});
  CHECK(voc.is_state_var("Q1"));
  CHECK_FALSE(voc.is_state_var("A"));
  CHECK(voc.start_channel("s2") == std::size_t{1});
  CHECK(voc.end_channel("e1") == std::size_t{0});
  CHECK_FALSE(voc.start_channel("A").has_value());
  CHECK(voc.is_letter_var("B"));
  CHECK(voc.all().size() == 8);

  ChannelSystem odd;
  odd.states = {"start", "q7"};
  odd.channels = {"ch"};
  odd.letters = {"a", "xy"};
  odd.instrs = {};
  LcsVocabulary voc2 = vocabulary_of(odd);
  CHECK(voc2.state_vars == std::vector<std::string>{"Q_start", "Q7"});
  CHECK(voc2.letter_vars == std::vector<std::string>{"A", "A_xy"});
}

TEST_CASE("vocabulary collisions are rejected") {
  ChannelSystem bad;
  bad.states = {"q1"};
  bad.channels = {"c1"};
  bad.letters = {"a", "a"};
  CHECK_THROWS_AS(vocabulary_of(bad), InvalidInput);
}

TEST_CASE("theory shape and counts") {
  ChannelSystem cs = parse_lcs(kIntro);
  Theory t = theory_of(cs);
  // 1 instruction sequent + 2 states x 6 non-state variables x 2 directions.
  CHECK(t.size() == 1 + 2 * 6 * 2);
  CHECK(is_regular(t));
  CHECK(std::count(t.begin(), t.end(), parse_sequent("s1,A,Q1 |- s1*Q2")) == 1);
  CHECK(std::count(t.begin(), t.end(), parse_sequent("A,Q1 |- Q1*A")) == 1);
  CHECK(std::count(t.begin(), t.end(), parse_sequent("Q1,A |- A*Q1")) == 1);
  CHECK(std::count(t.begin(), t.end(), parse_sequent("e2,Q2 |- Q2*e2")) == 1);

  ChannelSystem one = parse_lcs(kOneChan);
  Theory t1 = theory_of(one);
  // 2 instruction sequents + 2 states x 3 non-state variables x 2 directions.
  CHECK(t1.size() == 2 + 2 * 3 * 2);
  CHECK(std::count(t1.begin(), t1.end(), parse_sequent("s1,A,Q1 |- s1*Q2")) == 1);
  CHECK(std::count(t1.begin(), t1.end(), parse_sequent("e1,Q2 |- A*(e1*Q2)")) == 1);
}

TEST_CASE("configuration encodings") {
  ChannelSystem cs = parse_lcs(kIntro);
  Configuration u = parse_config(cs, "q1 : a a ; b");
  std::vector<Formula> enc = encode_conf(cs, u);
  std::vector<std::string> names;
  for (const Formula& f : enc) names.push_back(f.to_string());
  CHECK(names ==
        std::vector<std::string>{"Q1", "s1", "A", "A", "e1", "s2", "B", "e2"});

  Configuration v = parse_config(cs, "q2 : a ; b");
  Sequent goal = encode_problem(cs, u, v);
  CHECK(goal.to_string() == "Q1,s1,A,A,e1,s2,B,e2 |- Q2*(s1*(A*(e1*(s2*(B*e2)))))");
}

TEST_CASE("commuted encodings place the state variable everywhere") {
  ChannelSystem cs = parse_lcs(kIntro);
  Configuration u = parse_config(cs, "q1 : a a ; b");
  Configuration v = parse_config(cs, "q2 : a ; b");
  std::vector<Sequent> goals = commuted_encodings(cs, u, v);
  CHECK(goals.size() == 8);
  CHECK(goals[0] == encode_problem(cs, u, v));
  std::set<std::string> rendered;
  for (const Sequent& g : goals) {
    rendered.insert(g.to_string());
    CHECK(g.succedent == goals[0].succedent);
    CHECK(g.antecedent.size() == 8);
    CHECK(std::count(g.antecedent.begin(), g.antecedent.end(), Formula::var("Q1")) == 1);
  }
  CHECK(rendered.size() == 8);
  CHECK(rendered.count("s1,A,A,e1,s2,B,e2,Q1 |- Q2*(s1*(A*(e1*(s2*(B*e2)))))") == 1);

  EncodedInstance inst = reduce(cs, u, v);
  CHECK(inst.canonical_goal == goals[0]);
  CHECK(inst.commuted_goals == goals);
  CHECK(inst.theory == theory_of(cs));
}

TEST_CASE("empty computations compile to pure proofs") {
  ChannelSystem cs = parse_lcs(kIntro);
  Configuration u = parse_config(cs, "q1 : a ; b");
  Derivation d = compile_computation(cs, u, {});
  CHECK(d.sequent == encode_problem(cs, u, u));
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  CheckReport rep = check_deduction(calc, theory_of(cs), d);
  CHECK(rep.valid);
  CHECK(rep.standard);

  std::size_t theory_leaves = 0;
  std::vector<const Derivation*> stack = {&d};
  while (!stack.empty()) {
    const Derivation* cur = stack.back();
    stack.pop_back();
    if (cur->just == Derivation::Just::TheoryLeaf) ++theory_leaves;
    for (const Derivation& ch : cur->children) stack.push_back(&ch);
  }
  CHECK(theory_leaves == 0);
}

TEST_CASE("single read steps compile to one instruction cut") {
  ChannelSystem cs = parse_lcs(kIntro);
  Configuration u = parse_config(cs, "q1 : a a ; b");
  std::vector<TraceStep> trace = {TraceStep::perfect(0)};
  Derivation d = compile_computation(cs, u, trace);
  Configuration v = parse_config(cs, "q2 : a ; b");
  CHECK(d.sequent == encode_problem(cs, u, v));
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  CheckReport rep = check_deduction(calc, theory_of(cs), d);
  CHECK(rep.valid);
  CHECK(rep.standard);
}

TEST_CASE("write steps compile and grow the encoding") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q2 : a");
  std::vector<TraceStep> trace = {TraceStep::perfect(1)};
  Derivation d = compile_computation(cs, u, trace);
  Configuration v = parse_config(cs, "q2 : a a");
  CHECK(d.sequent == encode_problem(cs, u, v));
  CheckReport rep =
      check_deduction(builtin_calculus(Fragment::of({Conn::Fuse})), theory_of(cs), d);
  CHECK(rep.valid);
  CHECK(rep.standard);
}

TEST_CASE("lossy steps compile to a single weakening") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : a");
  std::vector<TraceStep> trace = {TraceStep::lossy(0, 0)};
  Derivation d = compile_computation(cs, u, trace);
  Configuration v = parse_config(cs, "q1 : ");
  CHECK(d.sequent == encode_problem(cs, u, v));
  CHECK(d.rule == "wl"); // the loss sits at the root, above the base proof
  CheckReport rep =
      check_deduction(builtin_calculus(Fragment::of({Conn::Fuse})), theory_of(cs), d);
  CHECK(rep.valid);
  CHECK(rep.standard);
}

TEST_CASE("longer mixed computations compile") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : a a");
  // read a (to q2), write a, lose the freshly written letter, write again.
  std::vector<TraceStep> trace = {TraceStep::perfect(0), TraceStep::perfect(1),
                                  TraceStep::lossy(0, 1), TraceStep::perfect(1)};
  Derivation d = compile_computation(cs, u, trace);
  Configuration v = parse_config(cs, "q2 : a a");
  CHECK(d.sequent == encode_problem(cs, u, v));
  CheckReport rep =
      check_deduction(builtin_calculus(Fragment::of({Conn::Fuse})), theory_of(cs), d);
  CHECK(rep.valid);
  CHECK(rep.standard);
  // Proof size stays linear in trace length times encoding size.
  CHECK(d.node_count() < 40 * (trace.size() + 1) * 8);
}

TEST_CASE("invalid traces are rejected") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : ");
  auto one = [](TraceStep s) { return std::vector<TraceStep>{s}; };
  CHECK_THROWS_AS(compile_computation(cs, u, one(TraceStep::perfect(0))), InvalidTrace);
  CHECK_THROWS_AS(compile_computation(cs, u, one(TraceStep::lossy(0, 0))), InvalidTrace);
  CHECK_THROWS_AS(compile_computation(cs, u, one(TraceStep::perfect(7))), InvalidTrace);
  Configuration w = parse_config(cs, "q1 : a");
  CHECK_THROWS_AS(compile_computation(cs, w, one(TraceStep::lossy(0, 3))), InvalidTrace);
  CHECK_THROWS_AS(compile_computation(cs, w, one(TraceStep::lossy(2, 0))), InvalidTrace);
}

TEST_CASE("deciding the encoded instance matches reachability") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : a a");
  Configuration v = parse_config(cs, "q2 : a");
  REQUIRE(reach_exact(cs, u, v));
  EncodedInstance inst = reduce(cs, u, v);
  Theory pool = inst.theory;
  pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
  std::vector<Formula> phi = subformula_closure(pool);
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  SaturationState st;
  Verdict verdict = decide(calc, inst.theory, phi, inst.commuted_goals, {}, &st);
  CHECK(verdict.yes);

  // An unreachable target: in q1 only losses apply, so the word cannot grow.
  Configuration bad = parse_config(cs, "q1 : a a a");
  REQUIRE_FALSE(reach_exact(cs, u, bad));
  EncodedInstance inst2 = reduce(cs, u, bad);
  Theory pool2 = inst2.theory;
  pool2.insert(pool2.end(), inst2.commuted_goals.begin(), inst2.commuted_goals.end());
  std::vector<Formula> phi2 = subformula_closure(pool2);
  CHECK_FALSE(decide(calc, inst2.theory, phi2, inst2.commuted_goals).yes);
}

TEST_CASE("corrupting the instruction theory is detected by the cross-check") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : a");
  Configuration v = parse_config(cs, "q2 : ");
  REQUIRE(reach_exact(cs, u, v));
  EncodedInstance inst = reduce(cs, u, v);
  // Break the read sequent: the simulated instruction now targets q1.
  Theory corrupted;
  for (const Sequent& s : inst.theory)
    if (s == parse_sequent("s1,A,Q1 |- s1*Q2"))
      corrupted.push_back(parse_sequent("s1,A,Q1 |- s1*Q1"));
    else
      corrupted.push_back(s);
  REQUIRE(corrupted.size() == inst.theory.size());
  Theory pool = corrupted;
  pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
  std::vector<Formula> phi = subformula_closure(pool);
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  CHECK_FALSE(decide(calc, corrupted, phi, inst.commuted_goals).yes);
}

TEST_CASE("structural properties hold on saturation frontiers of encoded theories") {
  ChannelSystem cs = parse_lcs(kOneChan);
  Configuration u = parse_config(cs, "q1 : a");
  Configuration v = parse_config(cs, "q2 : ");
  EncodedInstance inst = reduce(cs, u, v);
  Theory pool = inst.theory;
  pool.insert(pool.end(), inst.commuted_goals.begin(), inst.commuted_goals.end());
  std::vector<Formula> phi = subformula_closure(pool);
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  SaturationState st;
  decide(calc, inst.theory, phi, inst.commuted_goals, {}, &st);
  std::vector<Sequent> frontier = st.frontier_sequents();
  LemmaReport rep = lemma_property_suite(cs, frontier);
  CHECK(rep.ok());
  CHECK(rep.checked == frontier.size());
}

TEST_CASE("lemma suite flags crafted violations") {
  ChannelSystem cs = parse_lcs(kOneChan);
  LemmaReport empty = lemma_property_suite(cs, {});
  CHECK(empty.ok());
  CHECK(empty.checked == 0);

  std::vector<Sequent> bad = {
      parse_sequent("A |-"),          // empty succedent
      parse_sequent("A |- A*A"),      // letters not a subword of the antecedent
      parse_sequent("A |- s1*e1"),    // markers absent from the antecedent
      parse_sequent("A,A |- Q1*A"),   // state-led succedent, no state variable left
  };
  LemmaReport rep = lemma_property_suite(cs, bad);
  CHECK(rep.checked == bad.size());
  std::set<std::string> flagged;
  for (const auto& [s, why] : rep.violations) flagged.insert(s.to_string());
  CHECK(flagged.size() == bad.size()); // every mutant caught at least once

  std::vector<Sequent> fine = {
      parse_sequent("A,A |- A*A"),
      parse_sequent("s1,A,e1 |- s1*(A*e1)"),
      parse_sequent("Q1,A |- Q1*A"),
      parse_sequent("s1,Q1 |- s1*Q2"),
  };
  CHECK(lemma_property_suite(cs, fine).ok());
}
