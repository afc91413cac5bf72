// Cut normalization: rewrites arbitrary cuts into cuts whose left premise is
// a theory leaf, preserving the end sequent. Works bottom-up; each reduction
// step dispatches on the last rules of the two cut premises and either
// permutes the cut upward, absorbs it into a weakening/axiom, or splits a
// principal-principal cut into cuts on strict subformulas. Termination is by
// the lexicographic measure (cut-formula size, combined subtree size).
#include "flw/derivation.hpp"

#include <cassert>

namespace flw {

namespace {

using Fs = std::vector<Formula>;

Fs slice(const Fs& v, std::size_t b, std::size_t e) {
  return Fs(v.begin() + static_cast<std::ptrdiff_t>(b),
            v.begin() + static_cast<std::ptrdiff_t>(e));
}

Fs splice(const Fs& v, std::size_t pos, const Fs& repl) {
  Fs out = slice(v, 0, pos);
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(pos + 1), v.end());
  return out;
}

struct Rewriter {
  const Calculus& calc;
  const Theory& theory;
  std::uint64_t work = 0;
  static constexpr std::uint64_t kMaxWork = 50'000'000;

  void tick() {
    if (++work > kMaxWork)
      throw InternalInvariantViolated("cut normalization exceeded its work bound");
  }

  static bool is_theory(const Derivation& d) {
    return d.just == Derivation::Just::TheoryLeaf;
  }

  Substitution sigma_of(const Derivation& d) {
    if (d.subst) return *d.subst;
    const RuleSchema* schema = calc.find(d.rule);
    if (!schema)
      throw InternalInvariantViolated("normalize: unknown rule " + d.rule);
    std::vector<Sequent> prem;
    for (const Derivation& ch : d.children) prem.push_back(ch.sequent);
    auto sub = match_instance(*schema, prem, d.sequent);
    if (!sub)
      throw InternalInvariantViolated("normalize: node is not a rule instance");
    return *sub;
  }

  std::size_t seq_len(const Substitution& sub, const std::string& name) {
    auto it = sub.seq.find(name);
    if (it == sub.seq.end())
      throw InternalInvariantViolated("normalize: missing sequence metavariable " + name);
    return it->second.size();
  }

  // --- node builders (substitutions left to the checker's matcher) ---------

  static Derivation node1(std::string rule, Sequent s, Derivation c0) {
    std::vector<Derivation> ch;
    ch.push_back(std::move(c0));
    return Derivation::rule_node(std::move(rule), std::move(s), std::move(ch));
  }
  static Derivation node2(std::string rule, Sequent s, Derivation c0, Derivation c1) {
    std::vector<Derivation> ch;
    ch.push_back(std::move(c0));
    ch.push_back(std::move(c1));
    return Derivation::rule_node(std::move(rule), std::move(s), std::move(ch));
  }
  static Derivation leaf(std::string rule, Sequent s) {
    return Derivation::rule_node(std::move(rule), std::move(s), {});
  }

  static Derivation mk_wl(Derivation d, std::size_t pos, const Formula& f) {
    Sequent s = d.sequent;
    s.antecedent.insert(s.antecedent.begin() + static_cast<std::ptrdiff_t>(pos), f);
    return node1("wl", std::move(s), std::move(d));
  }

  static Derivation mk_wl_chain(Derivation d, std::size_t pos, const Fs& fs) {
    for (std::size_t i = 0; i < fs.size(); ++i) d = mk_wl(std::move(d), pos + i, fs[i]);
    return d;
  }

  static Derivation mk_wr(Derivation d, const Formula& f) {
    Sequent s = d.sequent;
    s.succedent = f;
    return node1("wr", std::move(s), std::move(d));
  }

  // Cut of left :: S |- f against right whose antecedent holds f at pos.
  static Derivation mk_cut(Derivation left, Derivation right, std::size_t pos) {
    Sequent s;
    s.antecedent = splice(right.sequent.antecedent, pos, left.sequent.antecedent);
    s.succedent = right.sequent.succedent;
    return node2("cut", std::move(s), std::move(left), std::move(right));
  }

  // --- the normalization pass ---------------------------------------------

  Derivation normalize(Derivation d) {
    for (Derivation& ch : d.children) ch = normalize(std::move(ch));
    if (d.rule == "cut" && !is_theory(d.children[0])) {
      Substitution sub = sigma_of(d);
      std::size_t pos = seq_len(sub, "G1");
      Derivation d1 = std::move(d.children[0]);
      Derivation d2 = std::move(d.children[1]);
      return reduce(d1, d2, pos);
    }
    return d;
  }

  // Eliminates the cut of d1 :: S |- f against d2 (f at antecedent position
  // pos of d2); both inputs contain only theory-anchored cuts, and so does
  // the result, which derives d2's sequent with f replaced by S.
  Derivation reduce(const Derivation& d1, const Derivation& d2, std::size_t pos) {
    tick();
    const Fs& sig = d1.sequent.antecedent; // S, the replacement segment
    const std::size_t R = sig.size();
    Sequent target;
    target.antecedent = splice(d2.sequent.antecedent, pos, sig);
    target.succedent = d2.sequent.succedent;

    // -- dispatch on d1's last rule --
    if (is_theory(d1)) return mk_cut(d1, d2, pos); // already standard
    const std::string& r1 = d1.rule;

    if (r1 == "id") return d2; // S = [f]; the cut is the identity

    if (r1 == "botl") return leaf("botl", target); // bottom stays in S

    if (r1 == "wr" || r1 == "zeror") {
      // d1's premise has an empty succedent; rebuild from it with weakenings
      // and the cut disappears.
      Derivation r = d1.children[0]; // :: S |-
      r = mk_wl_chain(std::move(r), R, slice(d2.sequent.antecedent, pos + 1,
                                             d2.sequent.antecedent.size()));
      r = mk_wl_chain(std::move(r), 0, slice(d2.sequent.antecedent, 0, pos));
      if (target.succedent) r = mk_wr(std::move(r), *target.succedent);
      return r;
    }

    // Left rules on d1: permute the cut into the succedent-carrying premise
    // and re-apply the rule inside the relocated segment.
    if (r1 == "wl" || r1 == "onel" || r1 == "fusl" || r1 == "andl1" || r1 == "andl2") {
      Substitution s1 = sigma_of(d1);
      std::size_t w1 = seq_len(s1, "G1");
      Derivation r = reduce(d1.children[0], d2, pos);
      if (r1 == "wl") return mk_wl(std::move(r), pos + w1, s1.fm.at("A"));
      if (r1 == "onel") {
        Sequent s = target;
        return node1("onel", std::move(s), std::move(r));
      }
      return node1(r1, target, std::move(r)); // fusl/andl1/andl2
    }
    if (r1 == "orl") {
      Derivation a = reduce(d1.children[0], d2, pos);
      Derivation b = reduce(d1.children[1], d2, pos);
      return node2("orl", target, std::move(a), std::move(b));
    }
    if (r1 == "rdivl" || r1 == "ldivl") {
      Derivation r = reduce(d1.children[1], d2, pos);
      return node2(r1, target, d1.children[0], std::move(r));
    }

    if (r1 == "cut") {
      // d1 is already standard: cut(theory leaf :: TH |- psi, d11).
      if (!is_theory(d1.children[0]))
        throw InternalInvariantViolated("normalize: non-standard cut survived in premise");
      Substitution s1 = sigma_of(d1);
      std::size_t w1 = seq_len(s1, "G1");
      Derivation inner = reduce(d1.children[1], d2, pos);
      return mk_cut(d1.children[0], inner, pos + w1);
    }

    if (r1 == "fusr" || r1 == "orr1" || r1 == "orr2" || r1 == "andr" ||
        r1 == "rdivr" || r1 == "ldivr" || r1 == "oner" || r1 == "topr")
      return reduce_right_intro(d1, d2, pos, target);

    throw InternalInvariantViolated("normalize: unexpected left-premise rule " + r1);
  }

  // d1 ends in a right introduction of the cut formula f (a compound, 1, or
  // top). Dispatch on d2's last rule: ride the f occurrence into the premise
  // that carries it, absorb into a weakening of f, or reduce a
  // principal-principal pair to cuts on strict subformulas.
  Derivation reduce_right_intro(const Derivation& d1, const Derivation& d2,
                                std::size_t pos, const Sequent& target) {
    const Fs& sig = d1.sequent.antecedent;
    const std::size_t R = sig.size();
    const std::string& r1 = d1.rule;

    if (is_theory(d2) || d2.rule == "id" || d2.rule == "zerol" || d2.rule == "oner")
      throw InternalInvariantViolated(
          "normalize: compound cut formula inside a variables-only leaf");

    const std::string& r2 = d2.rule;
    if (r2 == "botl") return leaf("botl", target);
    if (r2 == "topr") return leaf("topr", target);

    if (r2 == "wl") {
      Substitution s2 = sigma_of(d2);
      std::size_t w2 = seq_len(s2, "G1");
      if (w2 == pos) // the cut formula was weakened in; weaken S instead
        return mk_wl_chain(d2.children[0], pos, sig);
      std::size_t posp = pos < w2 ? pos : pos - 1;
      Derivation r = reduce(d1, d2.children[0], posp);
      std::size_t w2p = pos < w2 ? w2 + R - 1 : w2;
      return mk_wl(std::move(r), w2p, s2.fm.at("A"));
    }
    if (r2 == "onel") {
      Substitution s2 = sigma_of(d2);
      std::size_t w2 = seq_len(s2, "G1");
      if (w2 == pos) { // principal pair for the unit: d1 must end in oner
        if (r1 != "oner")
          throw InternalInvariantViolated("normalize: unit principal mismatch");
        return d2.children[0]; // S is empty, conclusion is the premise itself
      }
      std::size_t posp = pos < w2 ? pos : pos - 1;
      Derivation r = reduce(d1, d2.children[0], posp);
      return node1("onel", target, std::move(r));
    }
    if (r2 == "fusl") {
      Substitution s2 = sigma_of(d2);
      std::size_t w2 = seq_len(s2, "G1");
      if (w2 == pos) { // principal-principal on a fusion
        if (r1 != "fusr")
          throw InternalInvariantViolated("normalize: fusion principal mismatch");
        Derivation r1n = reduce(d1.children[1], d2.children[0], pos + 1);
        return reduce(d1.children[0], r1n, pos);
      }
      std::size_t posp = pos < w2 ? pos : pos + 1;
      Derivation r = reduce(d1, d2.children[0], posp);
      return node1("fusl", target, std::move(r));
    }
    if (r2 == "andl1" || r2 == "andl2") {
      Substitution s2 = sigma_of(d2);
      std::size_t w2 = seq_len(s2, "G1");
      if (w2 == pos) { // principal-principal on a conjunction
        if (r1 != "andr")
          throw InternalInvariantViolated("normalize: conjunction principal mismatch");
        return reduce(d1.children[r2 == "andl1" ? 0 : 1], d2.children[0], pos);
      }
      Derivation r = reduce(d1, d2.children[0], pos);
      return node1(r2, target, std::move(r));
    }
    if (r2 == "orl") {
      Substitution s2 = sigma_of(d2);
      std::size_t w2 = seq_len(s2, "G1");
      if (w2 == pos) { // principal-principal on a disjunction
        if (r1 == "orr1") return reduce(d1.children[0], d2.children[0], pos);
        if (r1 == "orr2") return reduce(d1.children[0], d2.children[1], pos);
        throw InternalInvariantViolated("normalize: disjunction principal mismatch");
      }
      Derivation a = reduce(d1, d2.children[0], pos);
      Derivation b = reduce(d1, d2.children[1], pos);
      return node2("orl", target, std::move(a), std::move(b));
    }
    if (r2 == "cut") {
      if (!is_theory(d2.children[0]))
        throw InternalInvariantViolated("normalize: non-standard cut survived in premise");
      Substitution s2 = sigma_of(d2);
      std::size_t wt = seq_len(s2, "G1");      // before the theory segment
      std::size_t th = seq_len(s2, "G3");      // theory antecedent length
      std::size_t posp;
      if (pos < wt)
        posp = pos;
      else if (pos >= wt + th)
        posp = pos - th + 1;
      else
        throw InternalInvariantViolated(
            "normalize: compound cut formula inside a theory antecedent");
      Derivation r = reduce(d1, d2.children[1], posp);
      std::size_t cutpos = wt + (pos < wt ? R - 1 : 0);
      return mk_cut(d2.children[0], std::move(r), cutpos);
    }
    if (r2 == "wr" || r2 == "zeror") {
      Derivation r = reduce(d1, d2.children[0], pos);
      return node1(r2, target, std::move(r));
    }
    if (r2 == "fusr") {
      std::size_t n0 = d2.children[0].sequent.antecedent.size();
      if (pos < n0) {
        Derivation r = reduce(d1, d2.children[0], pos);
        return node2("fusr", target, std::move(r), d2.children[1]);
      }
      Derivation r = reduce(d1, d2.children[1], pos - n0);
      return node2("fusr", target, d2.children[0], std::move(r));
    }
    if (r2 == "orr1" || r2 == "orr2" || r2 == "rdivr") {
      Derivation r = reduce(d1, d2.children[0], pos);
      return node1(r2, target, std::move(r));
    }
    if (r2 == "ldivr") {
      Derivation r = reduce(d1, d2.children[0], pos + 1);
      return node1(r2, target, std::move(r));
    }
    if (r2 == "andr") {
      Derivation a = reduce(d1, d2.children[0], pos);
      Derivation b = reduce(d1, d2.children[1], pos);
      return node2("andr", target, std::move(a), std::move(b));
    }
    if (r2 == "rdivl") {
      Substitution s2 = sigma_of(d2);
      std::size_t nd1 = seq_len(s2, "G2"); // context left of the principal
      std::size_t nth = seq_len(s2, "G1"); // first-premise antecedent length
      std::size_t wp = nd1;                // principal position
      if (pos == wp) { // principal-principal on an over-residual
        if (r1 != "rdivr")
          throw InternalInvariantViolated("normalize: over-residual principal mismatch");
        const Derivation& d11 = d1.children[0]; // :: S,alpha |- beta
        Derivation ra = reduce(d2.children[0], d11, d11.sequent.antecedent.size() - 1);
        return reduce(ra, d2.children[1], nd1);
      }
      if (pos < wp) {
        Derivation r = reduce(d1, d2.children[1], pos);
        return node2("rdivl", target, d2.children[0], std::move(r));
      }
      if (pos <= wp + nth) { // inside the first-premise region
        Derivation r = reduce(d1, d2.children[0], pos - wp - 1);
        return node2("rdivl", target, std::move(r), d2.children[1]);
      }
      Derivation r = reduce(d1, d2.children[1], pos - nth);
      return node2("rdivl", target, d2.children[0], std::move(r));
    }
    if (r2 == "ldivl") {
      Substitution s2 = sigma_of(d2);
      std::size_t nd1 = seq_len(s2, "G2");
      std::size_t nth = seq_len(s2, "G1");
      std::size_t wp = nd1 + nth; // principal position
      if (pos == wp) { // principal-principal on an under-residual
        if (r1 != "ldivr")
          throw InternalInvariantViolated("normalize: under-residual principal mismatch");
        const Derivation& d11 = d1.children[0]; // :: alpha,S |- beta
        Derivation ra = reduce(d2.children[0], d11, 0);
        return reduce(ra, d2.children[1], nd1);
      }
      if (pos < nd1) {
        Derivation r = reduce(d1, d2.children[1], pos);
        return node2("ldivl", target, d2.children[0], std::move(r));
      }
      if (pos < wp) { // inside the first-premise region
        Derivation r = reduce(d1, d2.children[0], pos - nd1);
        return node2("ldivl", target, std::move(r), d2.children[1]);
      }
      Derivation r = reduce(d1, d2.children[1], pos - nth);
      return node2("ldivl", target, d2.children[0], std::move(r));
    }

    throw InternalInvariantViolated("normalize: unexpected right-premise rule " + r2);
  }
};

} // namespace

Derivation normalize_to_standard(const Calculus& c, const Theory& t, const Derivation& d) {
  if (c.has_user_rules)
    throw InvalidInput("normalize_to_standard: user structural rules are not supported");
  if (!is_regular(t))
    throw InvalidInput("normalize_to_standard: theory must be regular");
  CheckReport rep = check_deduction(c, t, d);
  if (!rep.valid)
    throw InvalidInput("normalize_to_standard: input deduction is invalid:\n" +
                       rep.summary());
  Rewriter rw{c, t};
  return rw.normalize(d);
}

} // namespace flw
