#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "flw/errors.hpp"
#include "flw/lcs.hpp"

using namespace flw;

namespace {

const char* kIntro = R"(# one read instruction, two channels
states: q1 q2
channels: c1 c2
alphabet: a b
q1 c1 a ? q2
)";

ChannelSystem intro() { return parse_lcs(kIntro); }

ChannelSystem random_system(std::mt19937_64& rng) {
  ChannelSystem cs;
  std::size_t ns = 1 + rng() % 3, nc = 1 + rng() % 2, nl = 1 + rng() % 2;
  for (std::size_t i = 0; i < ns; ++i) cs.states.push_back("q" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nc; ++i) cs.channels.push_back("c" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nl; ++i)
    cs.letters.push_back(std::string(1, static_cast<char>('a' + i)));
  std::size_t ni = 1 + rng() % 4;
  for (std::size_t i = 0; i < ni; ++i)
    cs.instrs.push_back({rng() % ns, rng() % nc, rng() % nl, rng() % 2 == 0, rng() % ns});
  return cs;
}

Configuration random_configuration(std::mt19937_64& rng, const ChannelSystem& cs) {
  Configuration c;
  c.state = rng() % cs.states.size();
  c.words.resize(cs.channels.size());
  for (auto& w : c.words)
    for (std::size_t len = rng() % 3, j = 0; j < len; ++j)
      w.push_back(rng() % cs.letters.size());
  return c;
}

} // namespace

TEST_CASE("system files parse with comments and named lookups") {
  ChannelSystem cs = intro();
  CHECK(cs.states == std::vector<std::string>{"q1", "q2"});
  CHECK(cs.channels == std::vector<std::string>{"c1", "c2"});
  CHECK(cs.letters == std::vector<std::string>{"a", "b"});
  REQUIRE(cs.instrs.size() == 1);
  CHECK(cs.instrs[0].state == 0);
  CHECK(cs.instrs[0].chan == 0);
  CHECK(cs.instrs[0].letter == 0);
  CHECK_FALSE(cs.instrs[0].is_write);
  CHECK(cs.instrs[0].next == 1);
  CHECK(cs.state_index("q2") == 1);
  CHECK(cs.channel_index("c2") == 1);
  CHECK(cs.letter_index("b") == 1);
  CHECK_THROWS_AS(cs.state_index("zz"), InvalidInput);
  CHECK_THROWS_AS(parse_lcs("states: q1\nq1 c1 a ? q1\n"), ParseError);
  CHECK_THROWS_AS(parse_lcs("states: q1\nchannels: c1\nalphabet: a\nq1 c1 a x q1\n"),
                  ParseError);
}

TEST_CASE("configuration parse and print round trip") {
  ChannelSystem cs = intro();
  Configuration u = parse_config(cs, "q1 : a a ; b");
  CHECK(u.state == 0);
  REQUIRE(u.words.size() == 2);
  CHECK(u.words[0] == std::vector<std::size_t>{0, 0});
  CHECK(u.words[1] == std::vector<std::size_t>{1});
  CHECK(print_config(cs, u) == "q1 : a a ; b");
  Configuration empty = parse_config(cs, "q2 : ;");
  CHECK(empty.words[0].empty());
  CHECK(empty.words[1].empty());
  CHECK(parse_config(cs, print_config(cs, empty)) == empty);
  CHECK(u.total_letters() == 3);
  CHECK(u.max_word() == 2);
  CHECK_THROWS_AS(parse_config(cs, "zz : ;"), InvalidInput);
  CHECK_THROWS_AS(parse_config(cs, "q1 : z ;"), InvalidInput);
  CHECK_THROWS_AS(parse_config(cs, "q1 : a"), InvalidInput); // channel count
}

TEST_CASE("perfect steps read heads and append writes") {
  ChannelSystem cs = intro();
  Configuration u = parse_config(cs, "q1 : a a ; b");
  auto succs = step_perfect(cs, u);
  REQUIRE(succs.size() == 1);
  CHECK(succs[0].second == 0);
  CHECK(succs[0].first == parse_config(cs, "q2 : a ; b"));

  // Read blocked on the wrong head letter or empty channel.
  CHECK(step_perfect(cs, parse_config(cs, "q1 : b a ; b")).empty());
  CHECK(step_perfect(cs, parse_config(cs, "q1 : ;")).empty());
  // No instruction from q2.
  CHECK(step_perfect(cs, parse_config(cs, "q2 : a ;")).empty());

  ChannelSystem w = parse_lcs("states: q1\nchannels: c1\nalphabet: a b\nq1 c1 b ! q1\n");
  auto ws = step_perfect(w, parse_config(w, "q1 : a"));
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].first == parse_config(w, "q1 : a b"));
}

TEST_CASE("lossy steps drop single letters") {
  ChannelSystem cs = intro();
  Configuration u = parse_config(cs, "q1 : a b ; b");
  std::vector<Configuration> succs = step_lossy(u);
  std::set<std::string> got;
  for (const Configuration& c : succs) got.insert(print_config(cs, c));
  CHECK(got == std::set<std::string>{"q1 : b ; b", "q1 : a ; b", "q1 : a b ;"});
  CHECK(step_lossy(parse_config(cs, "q1 : ;")).empty());
}

TEST_CASE("configuration embedding is channelwise subword with equal state") {
  ChannelSystem cs = intro();
  CHECK(config_embed(parse_config(cs, "q1 : a ; b"), parse_config(cs, "q1 : a a ; b")));
  CHECK(config_embed(parse_config(cs, "q1 : ;"), parse_config(cs, "q1 : a a ; b")));
  CHECK_FALSE(
      config_embed(parse_config(cs, "q2 : a ; b"), parse_config(cs, "q1 : a a ; b")));
  CHECK_FALSE(
      config_embed(parse_config(cs, "q1 : b ; b"), parse_config(cs, "q1 : a a ;")));
}

TEST_CASE("golden reachability instance") {
  ChannelSystem cs = intro();
  Configuration u = parse_config(cs, "q1 : a a ; b");
  Configuration v = parse_config(cs, "q2 : a ; b");
  CHECK(reach_exact(cs, u, v));
  CHECK(reach_bounded(cs, u, v, 4) == BoundedReach::Yes);
  CHECK(reach_bounded(cs, u, v, 2) == BoundedReach::Yes);
}

TEST_CASE("unreachable targets and trivial reachability") {
  ChannelSystem w =
      parse_lcs("states: q1 q2\nchannels: c1\nalphabet: a b\nq1 c1 a ! q1\n");
  Configuration u = parse_config(w, "q1 : ");
  CHECK_FALSE(reach_exact(w, u, parse_config(w, "q2 : ")));
  CHECK_FALSE(reach_exact(w, u, parse_config(w, "q1 : b")));
  CHECK(reach_exact(w, u, parse_config(w, "q1 : a a a")));
  CHECK(reach_bounded(w, u, parse_config(w, "q1 : a a a"), 4) == BoundedReach::Yes);
  CHECK(reach_bounded(w, u, parse_config(w, "q1 : a a a"), 2) ==
        BoundedReach::NoWithinCap);
  CHECK(reach_exact(w, u, u)); // zero steps
}

TEST_CASE("bounded yes implies exact yes on random instances") {
  std::mt19937_64 rng(404);
  std::size_t yes = 0;
  for (int i = 0; i < 60; ++i) {
    ChannelSystem cs = random_system(rng);
    Configuration u = random_configuration(rng, cs);
    Configuration v = random_configuration(rng, cs);
    if (reach_bounded(cs, u, v, 4) == BoundedReach::Yes) {
      ++yes;
      CHECK(reach_exact(cs, u, v));
    }
  }
  CHECK(yes > 5); // the batch must exercise the implication
}

TEST_CASE("bigger start configurations cover the successors of smaller ones") {
  std::mt19937_64 rng(77);
  std::size_t checked = 0;
  for (int i = 0; i < 40 && checked < 60; ++i) {
    ChannelSystem cs = random_system(rng);
    Configuration small = random_configuration(rng, cs);
    Configuration big = small;
    // Pad some channel to get a strictly larger start.
    if (big.words.empty()) continue;
    big.words[rng() % big.words.size()].push_back(rng() % cs.letters.size());
    REQUIRE(config_embed(small, big));
    for (const auto& [succ, idx] : step_perfect(cs, small)) {
      ++checked;
      CHECK(reach_bounded(cs, big, succ, 8) == BoundedReach::Yes);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("free interleaving and phased loss closure reach the same bounded sets") {
  std::mt19937_64 rng(909);
  for (int i = 0; i < 25; ++i) {
    ChannelSystem cs = random_system(rng);
    Configuration u = random_configuration(rng, cs);
    CHECK(semantics_equivalence_probe(cs, u, 3));
  }
}

TEST_CASE("search budgets throw") {
  ChannelSystem w =
      parse_lcs("states: q1\nchannels: c1\nalphabet: a b\nq1 c1 a ! q1\nq1 c1 b ! q1\n");
  Configuration u = parse_config(w, "q1 : ");
  CHECK_THROWS_AS(reach_bounded(w, u, parse_config(w, "q1 : b b b b"), 4, 10),
                  BudgetExceeded);
}
