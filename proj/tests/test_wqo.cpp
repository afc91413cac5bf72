#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flw/errors.hpp"
#include "flw/order.hpp"
#include "flw/sequent.hpp"

using namespace flw;

namespace {

bool char_eq(const char& a, const char& b) { return a == b; }

bool word_embed(const std::string& a, const std::string& b) {
  std::vector<char> va(a.begin(), a.end()), vb(b.begin(), b.end());
  return subword_embed<char>(va, vb, char_eq);
}

std::vector<Sequent> random_sequents(std::mt19937_64& rng, std::size_t n) {
  std::vector<Sequent> out;
  const char* vars[] = {"p", "q"};
  for (std::size_t i = 0; i < n; ++i) {
    Sequent s;
    std::size_t len = rng() % 5;
    for (std::size_t j = 0; j < len; ++j)
      s.antecedent.push_back(Formula::var(vars[rng() % 2]));
    if (rng() % 3) s.succedent = Formula::var(vars[rng() % 2]);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace

TEST_CASE("subword embedding basics") {
  CHECK(word_embed("", ""));
  CHECK(word_embed("", "abc"));
  CHECK(word_embed("ab", "ab"));
  CHECK(word_embed("ab", "acb"));
  CHECK(word_embed("ab", "xaybz"));
  CHECK_FALSE(word_embed("ab", "ba"));
  CHECK_FALSE(word_embed("ab", "a"));
  CHECK_FALSE(word_embed("aa", "a"));
  CHECK_FALSE(word_embed("a", ""));
}

TEST_CASE("sequent embedding needs equal succedents") {
  CHECK(seq_embed(parse_sequent("p |- q"), parse_sequent("p,r |- q")));
  CHECK(seq_embed(parse_sequent("p |- q"), parse_sequent("r,p |- q")));
  CHECK(seq_embed(parse_sequent("|- q"), parse_sequent("p |- q")));
  CHECK(seq_embed(parse_sequent("p |-"), parse_sequent("p,q |-")));
  CHECK_FALSE(seq_embed(parse_sequent("p |- q"), parse_sequent("p |- r")));
  CHECK_FALSE(seq_embed(parse_sequent("p |-"), parse_sequent("p |- q")));
  CHECK_FALSE(seq_embed(parse_sequent("p |- q"), parse_sequent("p |-")));
  CHECK_FALSE(seq_embed(parse_sequent("p,p |- q"), parse_sequent("p |- q")));
  CHECK(norm(parse_sequent("p,q,p |- r")) == 3);
  CHECK(norm(parse_sequent("|- r")) == 0);
}

TEST_CASE("sequent order canonicalizes the alphabet") {
  std::vector<Formula> phi = {parse_formula("p*q"), parse_formula("p"),
                              parse_formula("q"), parse_formula("p")};
  SequentOrder ord(phi);
  CHECK(ord.phi.size() == 3);
  CHECK(ord.phi[0] == parse_formula("p")); // size, then rendering
  CHECK(ord.phi[1] == parse_formula("q"));
  CHECK(ord.phi[2] == parse_formula("p*q"));
  CHECK(ord.contains(parse_formula("p*q")));
  CHECK_FALSE(ord.contains(parse_formula("r")));
  CHECK(ord.is_phi_sequent(parse_sequent("p,q |- p*q")));
  CHECK_FALSE(ord.is_phi_sequent(parse_sequent("p |- r")));
  CHECK(ord.is_phi_sequent(parse_sequent("p |-")));
  CHECK_THROWS_AS(ord.id_of(parse_formula("r")), NotInAlphabet);
}

TEST_CASE("reflection agrees with the embedding") {
  SequentOrder ord({parse_formula("p"), parse_formula("q")});
  std::mt19937_64 rng(11);
  std::vector<Sequent> pool = random_sequents(rng, 60);
  for (const Sequent& a : pool)
    for (const Sequent& b : pool) {
      auto ra = reflection_map(ord, a);
      auto rb = reflection_map(ord, b);
      bool via_reflection =
          ra.first == rb.first &&
          subword_embed<Formula>(ra.second, rb.second,
                                 [](const Formula& x, const Formula& y) {
                                   return x == y;
                                 });
      CHECK(via_reflection == seq_embed(a, b));
    }
  CHECK_THROWS_AS(reflection_map(ord, parse_sequent("r |- p")), NotInAlphabet);
}

TEST_CASE("antichain keeps exactly the minimal elements") {
  SequentAntichain ac{SeqEmbedLe{}};
  auto r1 = ac.insert(parse_sequent("p,q |- r"));
  CHECK(r1.inserted);
  auto r2 = ac.insert(parse_sequent("p,q,q |- r"));
  CHECK_FALSE(r2.inserted);
  REQUIRE(r2.subsumed_by.has_value());
  CHECK(*r2.subsumed_by == parse_sequent("p,q |- r"));
  auto r3 = ac.insert(parse_sequent("p |- r"));
  CHECK(r3.inserted);
  REQUIRE(r3.removed.size() == 1);
  CHECK(r3.removed[0] == parse_sequent("p,q |- r"));
  CHECK(ac.size() == 1);
  auto r4 = ac.insert(parse_sequent("p |- q"));
  CHECK(r4.inserted);
  CHECK(ac.size() == 2);
  CHECK(ac.covers(parse_sequent("q,p,q |- r")));
  CHECK_FALSE(ac.covers(parse_sequent("q |- r")));
  auto r5 = ac.insert(parse_sequent("p |- r"));
  CHECK_FALSE(r5.inserted); // duplicates are covered by themselves
}

TEST_CASE("antichain result is insertion-order independent") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 30; ++round) {
    std::vector<Sequent> pool = random_sequents(rng, 12);
    std::vector<Sequent> shuffled = pool;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng() % i]);

    SequentAntichain a{SeqEmbedLe{}}, b{SeqEmbedLe{}};
    for (const Sequent& s : pool) a.insert(s);
    for (const Sequent& s : shuffled) b.insert(s);

    auto key = [](const Antichain<Sequent, SeqEmbedLe>& ac) {
      std::multiset<std::string> out;
      for (const Sequent& s : ac.elements()) out.insert(s.to_string());
      return out;
    };
    CHECK(key(a) == key(b));
  }
}

TEST_CASE("controlled traces check g-iterates of n") {
  ControlledTrace tr;
  tr.n = 3;
  tr.g = [](std::uint64_t x) { return 2 * x; };
  tr.norms = {2, 3, 5};
  CHECK(control_check(tr)); // 2<3, 3<6, 5<12
  tr.norms = {2, 7};
  CHECK_FALSE(control_check(tr));
  tr.norms = {3};
  CHECK_FALSE(control_check(tr)); // not strictly below
  tr.norms = {};
  CHECK(control_check(tr));
}

TEST_CASE("saturating multiplication never wraps") {
  CHECK(saturating_mul(3, 4) == 12);
  std::uint64_t big = std::numeric_limits<std::uint64_t>::max() / 2 + 1;
  CHECK(saturating_mul(big, 2) == std::numeric_limits<std::uint64_t>::max());
  CHECK(saturating_mul(0, big) == 0);
}

TEST_CASE("embedding is reflexive and transitive on random sequents") {
  std::mt19937_64 rng(23);
  std::vector<Sequent> pool = random_sequents(rng, 40);
  for (const Sequent& s : pool) CHECK(seq_embed(s, s));
  std::size_t checked = 0;
  for (const Sequent& a : pool)
    for (const Sequent& b : pool)
      for (const Sequent& c : pool)
        if (seq_embed(a, b) && seq_embed(b, c)) {
          ++checked;
          CHECK(seq_embed(a, c));
        }
  CHECK(checked > 0);
}
