#include "flw/encode.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "flw/order.hpp"

namespace flw {

// ---------------------------------------------------------------------------
// Vocabulary

std::vector<std::string> LcsVocabulary::all() const {
  std::vector<std::string> out = state_vars;
  for (std::size_t k = 0; k < start_markers.size(); ++k) {
    out.push_back(start_markers[k]);
    out.push_back(end_markers[k]);
  }
  out.insert(out.end(), letter_vars.begin(), letter_vars.end());
  return out;
}

bool LcsVocabulary::is_state_var(const std::string& name) const {
  return std::find(state_vars.begin(), state_vars.end(), name) != state_vars.end();
}

std::optional<std::size_t> LcsVocabulary::start_channel(const std::string& name) const {
  for (std::size_t k = 0; k < start_markers.size(); ++k)
    if (start_markers[k] == name) return k;
  return std::nullopt;
}

std::optional<std::size_t> LcsVocabulary::end_channel(const std::string& name) const {
  for (std::size_t k = 0; k < end_markers.size(); ++k)
    if (end_markers[k] == name) return k;
  return std::nullopt;
}

bool LcsVocabulary::is_letter_var(const std::string& name) const {
  return std::find(letter_vars.begin(), letter_vars.end(), name) != letter_vars.end();
}

LcsVocabulary vocabulary_of(const ChannelSystem& cs) {
  LcsVocabulary v;
  for (const std::string& q : cs.states) {
    bool digits = q.size() >= 2 && q[0] == 'q';
    for (std::size_t i = 1; digits && i < q.size(); ++i)
      digits = std::isdigit(static_cast<unsigned char>(q[i])) != 0;
    v.state_vars.push_back(digits ? "Q" + q.substr(1) : "Q_" + q);
  }
  for (std::size_t k = 0; k < cs.channels.size(); ++k) {
    v.start_markers.push_back("s" + std::to_string(k + 1));
    v.end_markers.push_back("e" + std::to_string(k + 1));
  }
  for (const std::string& a : cs.letters) {
    if (a.size() == 1 && a[0] >= 'a' && a[0] <= 'z')
      v.letter_vars.push_back(std::string(1, static_cast<char>(std::toupper(a[0]))));
    else
      v.letter_vars.push_back("A_" + a);
  }
  std::vector<std::string> names = v.all();
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size())
    throw InvalidInput("derived vocabulary names collide; rename states/letters");
  return v;
}

// ---------------------------------------------------------------------------
// Theory and encodings

namespace {
Formula fuse(const Formula& a, const Formula& b) {
  return Formula::bin(Conn::Fuse, a, b);
}
Formula var(const std::string& n) { return Formula::var(n); }

void push_unique(Theory& t, Sequent s) {
  for (const Sequent& prev : t)
    if (prev == s) return;
  t.push_back(std::move(s));
}
} // namespace

Theory theory_of(const ChannelSystem& cs) {
  LcsVocabulary v = vocabulary_of(cs);
  Theory t;
  for (const auto& ins : cs.instrs) {
    Formula q_src = var(v.state_vars[ins.state]);
    Formula q_dst = var(v.state_vars[ins.next]);
    Formula a = var(v.letter_vars[ins.letter]);
    if (ins.is_write) {
      // Undo an appended letter: ...,a,e_k,Q_dst fuses and trades back to
      // ...,e_k,Q_src.
      Formula e = var(v.end_markers[ins.chan]);
      Sequent s;
      s.antecedent = {e, q_src};
      s.succedent = fuse(a, fuse(e, q_dst));
      push_unique(t, std::move(s));
    } else {
      // Undo a consumed head letter: s_k,Q_dst fuses and trades back to
      // s_k,a,Q_src.
      Formula smark = var(v.start_markers[ins.chan]);
      Sequent s;
      s.antecedent = {smark, a, q_src};
      s.succedent = fuse(smark, q_dst);
      push_unique(t, std::move(s));
    }
  }
  // Commutation: a state variable trades places with any non-state variable.
  std::vector<std::string> others;
  for (std::size_t k = 0; k < cs.channels.size(); ++k) {
    others.push_back(v.start_markers[k]);
    others.push_back(v.end_markers[k]);
  }
  others.insert(others.end(), v.letter_vars.begin(), v.letter_vars.end());
  for (const std::string& qn : v.state_vars) {
    Formula q = var(qn);
    for (const std::string& rn : others) {
      Formula r = var(rn);
      Sequent right; // moves the state variable rightward when cut
      right.antecedent = {r, q};
      right.succedent = fuse(q, r);
      push_unique(t, std::move(right));
      Sequent left; // moves the state variable leftward when cut
      left.antecedent = {q, r};
      left.succedent = fuse(r, q);
      push_unique(t, std::move(left));
    }
  }
  return t;
}

std::vector<Formula> encode_conf(const ChannelSystem& cs, const Configuration& u) {
  if (u.words.size() != cs.channels.size())
    throw InvalidInput("configuration channel count does not match the system");
  if (u.state >= cs.states.size())
    throw InvalidInput("configuration state index out of range");
  LcsVocabulary v = vocabulary_of(cs);
  std::vector<Formula> out;
  out.push_back(var(v.state_vars[u.state]));
  for (std::size_t k = 0; k < u.words.size(); ++k) {
    out.push_back(var(v.start_markers[k]));
    for (std::size_t a : u.words[k]) {
      if (a >= cs.letters.size())
        throw InvalidInput("configuration letter index out of range");
      out.push_back(var(v.letter_vars[a]));
    }
    out.push_back(var(v.end_markers[k]));
  }
  return out;
}

Sequent encode_problem(const ChannelSystem& cs, const Configuration& u,
                       const Configuration& v) {
  Sequent s;
  s.antecedent = encode_conf(cs, u);
  std::vector<Formula> target = encode_conf(cs, v);
  s.succedent = fold_fusion(target, Fragment::of({Conn::Fuse}));
  return s;
}

std::vector<Sequent> commuted_encodings(const ChannelSystem& cs, const Configuration& u,
                                        const Configuration& v) {
  Sequent canonical = encode_problem(cs, u, v);
  std::vector<Sequent> out;
  Formula q = canonical.antecedent.front();
  std::vector<Formula> rest(canonical.antecedent.begin() + 1, canonical.antecedent.end());
  for (std::size_t p = 0; p <= rest.size(); ++p) {
    Sequent s;
    s.antecedent = rest;
    s.antecedent.insert(s.antecedent.begin() + static_cast<std::ptrdiff_t>(p), q);
    s.succedent = canonical.succedent;
    out.push_back(std::move(s));
  }
  return out;
}

EncodedInstance reduce(const ChannelSystem& cs, const Configuration& u,
                       const Configuration& v) {
  EncodedInstance inst;
  inst.theory = theory_of(cs);
  inst.canonical_goal = encode_problem(cs, u, v);
  inst.commuted_goals = commuted_encodings(cs, u, v);
  inst.vocabulary = vocabulary_of(cs);
  return inst;
}

// ---------------------------------------------------------------------------
// Computation compiler

namespace {

Derivation node1(std::string rule, Sequent s, Derivation c0) {
  std::vector<Derivation> ch;
  ch.push_back(std::move(c0));
  return Derivation::rule_node(std::move(rule), std::move(s), std::move(ch));
}
Derivation node2(std::string rule, Sequent s, Derivation c0, Derivation c1) {
  std::vector<Derivation> ch;
  ch.push_back(std::move(c0));
  ch.push_back(std::move(c1));
  return Derivation::rule_node(std::move(rule), std::move(s), std::move(ch));
}

// Proves xs |- fold(xs) for a nonempty variable sequence.
Derivation fold_proof(std::span<const Formula> xs) {
  Sequent head;
  head.antecedent = {xs.front()};
  head.succedent = xs.front();
  Derivation d = Derivation::rule_node("id", head, {});
  if (xs.size() == 1) return d;
  Derivation rest = fold_proof(xs.subspan(1));
  Sequent concl;
  concl.antecedent.assign(xs.begin(), xs.end());
  concl.succedent = Formula::bin(Conn::Fuse, xs.front(), *rest.sequent.succedent);
  return node2("fusr", std::move(concl), std::move(d), std::move(rest));
}

struct Compiler {
  const Theory& theory;

  // Fuses the two adjacent antecedent entries at pos into one.
  static Derivation fusl_at(Derivation d, std::size_t pos) {
    Sequent s = d.sequent;
    Formula merged = Formula::bin(Conn::Fuse, s.antecedent[pos], s.antecedent[pos + 1]);
    s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(pos));
    s.antecedent[pos] = merged;
    return node1("fusl", std::move(s), std::move(d));
  }

  // Standard cut against a theory sequent th :: S |- f where f sits at
  // antecedent position pos of d; the conclusion replaces f by S.
  Derivation cut_theory(Derivation d, const Sequent& th, std::size_t pos) {
    bool known = false;
    for (const Sequent& s : theory)
      if (s == th) { known = true; break; }
    if (!known)
      throw InternalInvariantViolated("compiler used a sequent outside the theory");
    Sequent s = d.sequent;
    s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(pos));
    s.antecedent.insert(s.antecedent.begin() + static_cast<std::ptrdiff_t>(pos),
                        th.antecedent.begin(), th.antecedent.end());
    return node2("cut", std::move(s), Derivation::theory_leaf(th), std::move(d));
  }

  // State variable at position pos trades places with its right neighbour.
  Derivation swap_right(Derivation d, std::size_t pos) {
    Formula q = d.sequent.antecedent[pos];
    Formula r = d.sequent.antecedent[pos + 1];
    Sequent th;
    th.antecedent = {r, q};
    th.succedent = Formula::bin(Conn::Fuse, q, r);
    return cut_theory(fusl_at(std::move(d), pos), th, pos);
  }

  // State variable at position pos trades places with its left neighbour.
  Derivation swap_left(Derivation d, std::size_t pos) {
    Formula q = d.sequent.antecedent[pos];
    Formula r = d.sequent.antecedent[pos - 1];
    Sequent th;
    th.antecedent = {q, r};
    th.succedent = Formula::bin(Conn::Fuse, r, q);
    return cut_theory(fusl_at(std::move(d), pos - 1), th, pos - 1);
  }

  Derivation move_right(Derivation d, std::size_t from, std::size_t to) {
    for (std::size_t p = from; p < to; ++p) d = swap_right(std::move(d), p);
    return d;
  }
  Derivation move_left(Derivation d, std::size_t from, std::size_t to) {
    for (std::size_t p = from; p > to; --p) d = swap_left(std::move(d), p);
    return d;
  }
};

} // namespace

Derivation compile_computation(const ChannelSystem& cs, const Configuration& u,
                               std::span<const TraceStep> steps) {
  // Replay the trace first; every intermediate configuration is needed.
  std::vector<Configuration> confs{u};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const TraceStep& st = steps[i];
    Configuration c = confs.back();
    if (st.kind == TraceStep::Kind::Perfect) {
      if (st.instr >= cs.instrs.size())
        throw InvalidTrace("step " + std::to_string(i) + ": no such instruction");
      const auto& ins = cs.instrs[st.instr];
      if (ins.state != c.state)
        throw InvalidTrace("step " + std::to_string(i) + ": instruction not enabled");
      if (ins.is_write) {
        c.words[ins.chan].push_back(ins.letter);
      } else {
        auto& w = c.words[ins.chan];
        if (w.empty() || w.front() != ins.letter)
          throw InvalidTrace("step " + std::to_string(i) + ": head letter mismatch");
        w.erase(w.begin());
      }
      c.state = ins.next;
    } else {
      if (st.chan >= c.words.size() || st.pos >= c.words[st.chan].size())
        throw InvalidTrace("step " + std::to_string(i) + ": lost letter out of range");
      c.words[st.chan].erase(c.words[st.chan].begin() +
                             static_cast<std::ptrdiff_t>(st.pos));
    }
    confs.push_back(std::move(c));
  }

  Theory theory = theory_of(cs);
  LcsVocabulary voc = vocabulary_of(cs);
  Compiler compiler{theory};
  const Configuration& final_conf = confs.back();
  std::vector<Formula> target = encode_conf(cs, final_conf);
  Derivation d = fold_proof(target);

  // Extend backward: from a deduction for confs[i+1] build one for confs[i].
  for (std::size_t i = confs.size() - 1; i-- > 0;) {
    const TraceStep& st = steps[i];
    std::vector<Formula> enc_pre = encode_conf(cs, confs[i]);
    if (st.kind == TraceStep::Kind::Lossy) {
      // One weakening restores the lost letter.
      Sequent s;
      s.antecedent = enc_pre;
      s.succedent = d.sequent.succedent;
      d = node1("wl", std::move(s), std::move(d));
    } else {
      const auto& ins = cs.instrs[st.instr];
      Formula q_src = Formula::var(voc.state_vars[ins.state]);
      Formula q_dst = Formula::var(voc.state_vars[ins.next]);
      Formula a = Formula::var(voc.letter_vars[ins.letter]);
      // Position of the channel's markers in the post-step encoding.
      std::size_t marker = 1;
      for (std::size_t k = 0; k < ins.chan; ++k)
        marker += 2 + confs[i + 1].words[k].size();
      if (ins.is_write) {
        std::size_t e_pos = marker + 1 + confs[i + 1].words[ins.chan].size();
        d = compiler.move_right(std::move(d), 0, e_pos);
        d = compiler.fusl_at(std::move(d), e_pos - 1); // e_k * q_dst
        d = compiler.fusl_at(std::move(d), e_pos - 2); // a * (e_k * q_dst)
        Sequent th;
        th.antecedent = {Formula::var(voc.end_markers[ins.chan]), q_src};
        th.succedent = Formula::bin(
            Conn::Fuse, a,
            Formula::bin(Conn::Fuse, Formula::var(voc.end_markers[ins.chan]), q_dst));
        d = compiler.cut_theory(std::move(d), th, e_pos - 2);
        d = compiler.move_left(std::move(d), e_pos - 1, 0);
      } else {
        std::size_t s_pos = marker;
        d = compiler.move_right(std::move(d), 0, s_pos);
        d = compiler.fusl_at(std::move(d), s_pos - 1); // s_k * q_dst
        Sequent th;
        th.antecedent = {Formula::var(voc.start_markers[ins.chan]), a, q_src};
        th.succedent =
            Formula::bin(Conn::Fuse, Formula::var(voc.start_markers[ins.chan]), q_dst);
        d = compiler.cut_theory(std::move(d), th, s_pos - 1);
        d = compiler.move_left(std::move(d), s_pos + 1, 0);
      }
    }
    if (!(d.sequent.antecedent == enc_pre))
      throw InternalInvariantViolated("compiled step does not restore the encoding");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Structural-property suite

namespace {

// Flattens every antecedent entry into one variable-name word, if possible.
std::optional<std::vector<std::string>> flat_antecedent(const Sequent& s) {
  std::vector<std::string> out;
  try {
    for (const Formula& f : s.antecedent) {
      std::vector<std::string> part = flatten(f);
      out.insert(out.end(), part.begin(), part.end());
    }
  } catch (const NotFlattenable&) {
    return std::nullopt;
  }
  return out;
}

bool mentions_state_var(const Formula& f, const LcsVocabulary& voc) {
  if (f.is_var()) return voc.is_state_var(f.name());
  if (f.is_bin())
    return mentions_state_var(f.left(), voc) || mentions_state_var(f.right(), voc);
  return false;
}

// Does w read as part of one configuration encoding? An optional leading
// state variable, then markers in canonical channel order (each at most
// once) with letters only in zones compatible with the surrounding markers.
bool encoding_shaped(const std::vector<std::string>& w, const LcsVocabulary& voc) {
  if (w.empty()) return false;
  std::size_t i = 0;
  std::size_t cur = 0; // class: s_k -> 3k-2, letters of k -> 3k-1, e_k -> 3k
  std::size_t m = voc.start_markers.size();
  if (voc.is_state_var(w[0])) i = 1;
  for (; i < w.size(); ++i) {
    const std::string& x = w[i];
    if (voc.is_state_var(x)) return false; // only allowed in front
    if (auto k = voc.start_channel(x)) {
      std::size_t cls = 3 * (*k + 1) - 2;
      if (cls <= cur) return false;
      cur = cls;
    } else if (auto k2 = voc.end_channel(x)) {
      std::size_t cls = 3 * (*k2 + 1);
      if (cls <= cur) return false;
      cur = cls;
    } else if (voc.is_letter_var(x)) {
      // smallest letter zone at or after cur
      std::size_t zone = 0;
      for (std::size_t k3 = 1; k3 <= m; ++k3) {
        if (3 * k3 - 1 >= cur) {
          zone = 3 * k3 - 1;
          break;
        }
      }
      if (zone == 0) return false;
      cur = zone;
    } else {
      return false; // not a vocabulary variable
    }
  }
  return true;
}

} // namespace

LemmaReport lemma_property_suite(const ChannelSystem& cs, std::span<const Sequent> seqs) {
  LcsVocabulary voc = vocabulary_of(cs);
  LemmaReport rep;
  for (const Sequent& s : seqs) {
    ++rep.checked;
    auto flag = [&](const std::string& why) { rep.violations.emplace_back(s, why); };

    // (1) Succedents never vanish.
    if (!s.succedent) {
      flag("empty succedent");
      continue;
    }

    std::optional<std::vector<std::string>> ant = flat_antecedent(s);
    std::optional<std::vector<std::string>> suc;
    try {
      suc = flatten(*s.succedent);
    } catch (const NotFlattenable&) {
      suc = std::nullopt;
    }

    // (2) With a state-variable-free antecedent, the succedent's non-state
    // letters embed into the antecedent's.
    if (ant && suc) {
      bool ant_has_state = false;
      for (const std::string& n : *ant)
        if (voc.is_state_var(n)) ant_has_state = true;
      if (!ant_has_state) {
        std::vector<std::string> needed;
        for (const std::string& n : *suc)
          if (!voc.is_state_var(n)) needed.push_back(n);
        if (!subword_embed<std::string>(needed, *ant))
          flag("succedent letters not a subword of a state-free antecedent");
      }
    }

    // (3) Encoding-shaped succedents only mention markers the antecedent has.
    if (ant && suc && encoding_shaped(*suc, voc)) {
      for (const std::string& n : *suc) {
        bool is_marker = voc.start_channel(n).has_value() || voc.end_channel(n).has_value();
        if (is_marker &&
            std::find(ant->begin(), ant->end(), n) == ant->end()) {
          flag("succedent marker '" + n + "' missing from the antecedent");
          break;
        }
      }
    }

    // (4) A succedent led by a state variable needs a state variable on the
    // left as well.
    const Formula& f = *s.succedent;
    bool state_led = (f.is_var() && voc.is_state_var(f.name())) ||
                     (f.is_bin() && f.conn() == Conn::Fuse && f.left().is_var() &&
                      voc.is_state_var(f.left().name()));
    if (state_led) {
      bool found = false;
      for (const Formula& g : s.antecedent)
        if (mentions_state_var(g, voc)) found = true;
      if (!found) flag("state-led succedent with a state-free antecedent");
    }
  }
  return rep;
}

} // namespace flw
