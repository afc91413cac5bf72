#include "flw/rules.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace flw {

// ---------------------------------------------------------------------------
// PatFormula

PatFormula PatFormula::fmvar(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::FmVar;
  n->conn = Conn::Zero;
  n->name = std::move(name);
  PatFormula p;
  p.node_ = std::move(n);
  return p;
}

PatFormula PatFormula::propvar(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::PropVar;
  n->conn = Conn::Zero;
  n->name = std::move(name);
  PatFormula p;
  p.node_ = std::move(n);
  return p;
}

PatFormula PatFormula::constant(Conn c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->conn = c;
  PatFormula p;
  p.node_ = std::move(n);
  return p;
}

PatFormula PatFormula::bin(Conn c, PatFormula l, PatFormula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bin;
  n->conn = c;
  n->left = std::move(l);
  n->right = std::move(r);
  PatFormula p;
  p.node_ = std::move(n);
  return p;
}

std::size_t PatFormula::size_tokens() const {
  switch (kind()) {
    case Kind::FmVar:
    case Kind::PropVar:
    case Kind::Const: return 1;
    case Kind::Bin: return left().size_tokens() + right().size_tokens() + 3;
  }
  return 0;
}

std::string PatFormula::to_string() const {
  switch (kind()) {
    case Kind::FmVar: return name();
    case Kind::PropVar: return name();
    case Kind::Const: return conn_token(conn());
    case Kind::Bin:
      return "(" + left().to_string() + conn_token(conn()) + right().to_string() + ")";
  }
  return "?";
}

bool PatFormula::mentions_connective() const {
  switch (kind()) {
    case Kind::FmVar:
    case Kind::PropVar: return false;
    case Kind::Const: return true;
    case Kind::Bin: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Patterns / schemas

std::size_t SequentPattern::size_tokens() const {
  std::size_t n = 1; // turnstile
  for (const PatItem& it : antecedent)
    n += it.kind == PatItem::Kind::SeqVar ? 1 : it.fm.size_tokens();
  if (antecedent.size() > 1) n += antecedent.size() - 1;
  if (succ_kind == Succ::Var) n += 1;
  if (succ_kind == Succ::Fm) n += succ_fm.size_tokens();
  return n;
}

std::string SequentPattern::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += ',';
    const PatItem& it = antecedent[i];
    out += it.kind == PatItem::Kind::SeqVar ? it.seqvar : it.fm.to_string();
  }
  if (!antecedent.empty()) out += ' ';
  out += "|-";
  if (succ_kind == Succ::Var) out += " " + succ_var + "?";
  if (succ_kind == Succ::Fm) out += " " + succ_fm.to_string();
  return out;
}

std::size_t RuleSchema::size_tokens() const {
  std::size_t n = conclusion.size_tokens() + 1; // "=>" counts one token
  for (const SequentPattern& p : premises) n += p.size_tokens();
  if (premises.size() > 1) n += premises.size() - 1; // ";" separators
  return n;
}

std::string RuleSchema::to_string() const {
  std::string out = "rule " + name + ": ";
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (i) out += " ; ";
    out += premises[i].to_string();
  }
  if (!premises.empty()) out += ' ';
  out += "=> " + conclusion.to_string();
  return out;
}

const RuleSchema* Calculus::find(const std::string& name) const {
  for (const RuleSchema& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

std::size_t Calculus::size_tokens() const {
  std::size_t n = 0;
  for (const RuleSchema& r : rules) n += r.size_tokens();
  return n;
}

std::size_t Calculus::family_count() const {
  std::set<std::string> fams;
  for (const RuleSchema& r : rules) fams.insert(r.family);
  return fams.size();
}

// ---------------------------------------------------------------------------
// Builtin calculus

namespace {

PatItem G(int i) { return PatItem::seq("G" + std::to_string(i)); }
PatFormula FA() { return PatFormula::fmvar("A"); }
PatFormula FB() { return PatFormula::fmvar("B"); }

SequentPattern pat(std::vector<PatItem> ant, SequentPattern::Succ kind,
                   PatFormula fm = {}, std::string var = {}) {
  SequentPattern p;
  p.antecedent = std::move(ant);
  p.succ_kind = kind;
  p.succ_fm = std::move(fm);
  p.succ_var = std::move(var);
  return p;
}
SequentPattern pat_succ_var(std::vector<PatItem> ant) {
  return pat(std::move(ant), SequentPattern::Succ::Var, {}, "P");
}
SequentPattern pat_succ_fm(std::vector<PatItem> ant, PatFormula f) {
  return pat(std::move(ant), SequentPattern::Succ::Fm, std::move(f));
}
SequentPattern pat_succ_empty(std::vector<PatItem> ant) {
  return pat(std::move(ant), SequentPattern::Succ::Empty);
}

RuleSchema mk(std::string name, std::string family,
              std::vector<SequentPattern> prem, SequentPattern concl) {
  RuleSchema r;
  r.name = std::move(name);
  r.family = std::move(family);
  r.premises = std::move(prem);
  r.conclusion = std::move(concl);
  return r;
}

} // namespace

Calculus builtin_calculus(Fragment frag) {
  Calculus c;
  c.frag = frag;
  auto add = [&](RuleSchema r) { c.rules.push_back(std::move(r)); };

  // Axioms.
  add(mk("id", "id", {},
         pat_succ_fm({PatItem::formula(PatFormula::propvar("a"))}, PatFormula::propvar("a"))));
  if (frag.has(Conn::Bot))
    add(mk("botl", "botl", {},
           pat_succ_var({G(1), PatItem::formula(PatFormula::constant(Conn::Bot)), G(2)})));
  if (frag.has(Conn::Top))
    add(mk("topr", "topr", {}, pat_succ_fm({G(1)}, PatFormula::constant(Conn::Top))));
  if (frag.has(Conn::Zero))
    add(mk("zerol", "zerol", {},
           pat_succ_empty({PatItem::formula(PatFormula::constant(Conn::Zero))})));
  if (frag.has(Conn::One))
    add(mk("oner", "oner", {}, pat_succ_fm({}, PatFormula::constant(Conn::One))));

  // Structural rules.
  add(mk("wl", "wl", {pat_succ_var({G(1), G(2)})},
         pat_succ_var({G(1), PatItem::formula(FA()), G(2)})));
  add(mk("wr", "wr", {pat_succ_empty({G(1)})}, pat_succ_fm({G(1)}, FA())));
  add(mk("cut", "cut",
         {pat_succ_fm({G(3)}, FA()),
          pat_succ_var({G(1), PatItem::formula(FA()), G(2)})},
         pat_succ_var({G(1), G(3), G(2)})));

  // Constant introductions.
  if (frag.has(Conn::Zero))
    add(mk("zeror", "zeror", {pat_succ_empty({G(1)})},
           pat_succ_fm({G(1)}, PatFormula::constant(Conn::Zero))));
  if (frag.has(Conn::One))
    add(mk("onel", "onel", {pat_succ_var({G(1), G(2)})},
           pat_succ_var({G(1), PatItem::formula(PatFormula::constant(Conn::One)), G(2)})));

  // Fusion.
  if (frag.has(Conn::Fuse)) {
    add(mk("fusl", "fusl",
           {pat_succ_var({G(1), PatItem::formula(FA()), PatItem::formula(FB()), G(2)})},
           pat_succ_var({G(1), PatItem::formula(PatFormula::bin(Conn::Fuse, FA(), FB())), G(2)})));
    add(mk("fusr", "fusr", {pat_succ_fm({G(1)}, FA()), pat_succ_fm({G(2)}, FB())},
           pat_succ_fm({G(1), G(2)}, PatFormula::bin(Conn::Fuse, FA(), FB()))));
  }

  // Additive disjunction / conjunction; the one-of-two-premise forms are two
  // schemas sharing one family.
  if (frag.has(Conn::Or)) {
    add(mk("orl", "orl",
           {pat_succ_var({G(1), PatItem::formula(FA()), G(2)}),
            pat_succ_var({G(1), PatItem::formula(FB()), G(2)})},
           pat_succ_var({G(1), PatItem::formula(PatFormula::bin(Conn::Or, FA(), FB())), G(2)})));
    add(mk("orr1", "orr", {pat_succ_fm({G(1)}, FA())},
           pat_succ_fm({G(1)}, PatFormula::bin(Conn::Or, FA(), FB()))));
    add(mk("orr2", "orr", {pat_succ_fm({G(1)}, FB())},
           pat_succ_fm({G(1)}, PatFormula::bin(Conn::Or, FA(), FB()))));
  }
  if (frag.has(Conn::And)) {
    add(mk("andl1", "andl",
           {pat_succ_var({G(1), PatItem::formula(FA()), G(2)})},
           pat_succ_var({G(1), PatItem::formula(PatFormula::bin(Conn::And, FA(), FB())), G(2)})));
    add(mk("andl2", "andl",
           {pat_succ_var({G(1), PatItem::formula(FB()), G(2)})},
           pat_succ_var({G(1), PatItem::formula(PatFormula::bin(Conn::And, FA(), FB())), G(2)})));
    add(mk("andr", "andr", {pat_succ_fm({G(1)}, FA()), pat_succ_fm({G(1)}, FB())},
           pat_succ_fm({G(1)}, PatFormula::bin(Conn::And, FA(), FB()))));
  }

  // Residuals. Over: (B/A); Under: (A\B).
  if (frag.has(Conn::Over)) {
    add(mk("rdivl", "rdivl",
           {pat_succ_fm({G(1)}, FA()),
            pat_succ_var({G(2), PatItem::formula(FB()), G(3)})},
           pat_succ_var({G(2), PatItem::formula(PatFormula::bin(Conn::Over, FB(), FA())), G(1), G(3)})));
    add(mk("rdivr", "rdivr", {pat_succ_fm({G(1), PatItem::formula(FA())}, FB())},
           pat_succ_fm({G(1)}, PatFormula::bin(Conn::Over, FB(), FA()))));
  }
  if (frag.has(Conn::Under)) {
    add(mk("ldivl", "ldivl",
           {pat_succ_fm({G(1)}, FA()),
            pat_succ_var({G(2), PatItem::formula(FB()), G(3)})},
           pat_succ_var({G(2), G(1), PatItem::formula(PatFormula::bin(Conn::Under, FA(), FB())), G(3)})));
    add(mk("ldivr", "ldivr", {pat_succ_fm({PatItem::formula(FA()), G(1)}, FB())},
           pat_succ_fm({G(1)}, PatFormula::bin(Conn::Under, FA(), FB()))));
  }

  return c;
}

// ---------------------------------------------------------------------------
// User structural rules

namespace {
void check_structural(const SequentPattern& p, const std::string& rule) {
  for (const PatItem& it : p.antecedent)
    if (it.kind == PatItem::Kind::Fm && it.fm.mentions_connective())
      throw NotStructural("rule " + rule + ": constants/connectives not allowed");
  if (p.succ_kind == SequentPattern::Succ::Fm && p.succ_fm.mentions_connective())
    throw NotStructural("rule " + rule + ": constants/connectives not allowed");
}
} // namespace

Calculus add_structural_rule(const Calculus& c, const RuleSchema& r) {
  for (const SequentPattern& p : r.premises) check_structural(p, r.name);
  check_structural(r.conclusion, r.name);
  if (c.find(r.name))
    throw InvalidInput("rule name '" + r.name + "' already present in the calculus");
  Calculus out = c;
  out.rules.push_back(r);
  out.has_user_rules = true;
  return out;
}

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_seqvar_token(const std::string& t) {
  if (t.size() < 2 || t[0] != 'G') return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

bool is_fmvar_token(const std::string& t) {
  return t.size() == 1 && t[0] >= 'A' && t[0] <= 'F';
}

SequentPattern parse_pattern_sequent(const std::string& text, const std::string& rule) {
  std::size_t tpos = text.find("|-");
  if (tpos == std::string::npos)
    throw ParseError("rule " + rule + ": pattern sequent missing '|-': " + text);
  SequentPattern p;
  std::string lhs = text.substr(0, tpos);
  std::string rhs = trim_copy(text.substr(tpos + 2));
  if (!trim_copy(lhs).empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t comma = lhs.find(',', start);
      std::string tok = trim_copy(comma == std::string::npos
                                      ? lhs.substr(start)
                                      : lhs.substr(start, comma - start));
      if (tok.empty())
        throw ParseError("rule " + rule + ": empty antecedent entry");
      if (is_seqvar_token(tok))
        p.antecedent.push_back(PatItem::seq(tok));
      else if (is_fmvar_token(tok))
        p.antecedent.push_back(PatItem::formula(PatFormula::fmvar(tok)));
      else
        throw NotStructural("rule " + rule + ": token '" + tok +
                            "' is not a metavariable (G<digits>, A..F)");
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (rhs.empty()) {
    p.succ_kind = SequentPattern::Succ::Empty;
  } else if (rhs.back() == '?') {
    std::string name = trim_copy(rhs.substr(0, rhs.size() - 1));
    if (name.empty())
      throw ParseError("rule " + rule + ": '?' needs a metavariable name");
    p.succ_kind = SequentPattern::Succ::Var;
    p.succ_var = name;
  } else if (is_fmvar_token(rhs)) {
    p.succ_kind = SequentPattern::Succ::Fm;
    p.succ_fm = PatFormula::fmvar(rhs);
  } else {
    throw NotStructural("rule " + rule + ": succedent '" + rhs +
                        "' is not a metavariable (A..F or X?)");
  }
  return p;
}

} // namespace

RuleSchema parse_rule_schema(const std::string& line) {
  std::string s = trim_copy(line);
  if (s.rfind("rule", 0) != 0)
    throw ParseError("rule schema must start with 'rule': " + line);
  std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw ParseError("rule schema missing ':': " + line);
  std::string name = trim_copy(s.substr(4, colon - 4));
  if (name.empty()) throw ParseError("rule schema missing a name: " + line);
  std::string body = s.substr(colon + 1);
  std::size_t arrow = body.find("=>");
  if (arrow == std::string::npos) throw ParseError("rule schema missing '=>': " + line);
  std::string prem_text = body.substr(0, arrow);
  std::string concl_text = trim_copy(body.substr(arrow + 2));

  RuleSchema r;
  r.name = name;
  r.family = name;
  if (!trim_copy(prem_text).empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t semi = prem_text.find(';', start);
      std::string piece = semi == std::string::npos
                              ? prem_text.substr(start)
                              : prem_text.substr(start, semi - start);
      r.premises.push_back(parse_pattern_sequent(trim_copy(piece), name));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
  }
  r.conclusion = parse_pattern_sequent(concl_text, name);
  return r;
}

// ---------------------------------------------------------------------------
// Matching

std::string Substitution::to_string() const {
  std::string out;
  auto sep = [&] { if (!out.empty()) out += "; "; };
  for (const auto& [k, v] : seq) {
    sep();
    out += k + " -> [";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += v[i].to_string();
    }
    out += "]";
  }
  for (const auto& [k, v] : fm) {
    sep();
    out += k + " -> " + v.to_string();
  }
  for (const auto& [k, v] : prop) {
    sep();
    out += k + " -> " + v.to_string();
  }
  for (const auto& [k, v] : succ) {
    sep();
    out += k + " -> " + (v ? v->to_string() : std::string("<empty>"));
  }
  return out;
}

namespace {

Formula subst_formula(const PatFormula& p, const Substitution& sub) {
  switch (p.kind()) {
    case PatFormula::Kind::FmVar: {
      auto it = sub.fm.find(p.name());
      if (it == sub.fm.end())
        throw InternalInvariantViolated("instantiate: unbound formula metavariable " + p.name());
      return it->second;
    }
    case PatFormula::Kind::PropVar: {
      auto it = sub.prop.find(p.name());
      if (it == sub.prop.end())
        throw InternalInvariantViolated("instantiate: unbound prop metavariable " + p.name());
      return it->second;
    }
    case PatFormula::Kind::Const: return Formula::constant(p.conn());
    case PatFormula::Kind::Bin:
      return Formula::bin(p.conn(), subst_formula(p.left(), sub),
                          subst_formula(p.right(), sub));
  }
  throw InternalInvariantViolated("instantiate: bad pattern kind");
}

// Undo log for partial bindings during backtracking search.
struct Trail {
  Substitution& sub;
  enum class Cat { Seq, Fm, Prop, Succ };
  std::vector<std::pair<Cat, std::string>> log;

  explicit Trail(Substitution& s) : sub(s) {}
  std::size_t mark() const { return log.size(); }
  void undo(std::size_t m) {
    while (log.size() > m) {
      auto [cat, key] = log.back();
      log.pop_back();
      switch (cat) {
        case Cat::Seq: sub.seq.erase(key); break;
        case Cat::Fm: sub.fm.erase(key); break;
        case Cat::Prop: sub.prop.erase(key); break;
        case Cat::Succ: sub.succ.erase(key); break;
      }
    }
  }

  bool bind_seq(const std::string& k, std::vector<Formula> v) {
    auto it = sub.seq.find(k);
    if (it != sub.seq.end()) return it->second == v;
    sub.seq.emplace(k, std::move(v));
    log.emplace_back(Cat::Seq, k);
    return true;
  }
  bool bind_fm(const std::string& k, const Formula& v) {
    auto it = sub.fm.find(k);
    if (it != sub.fm.end()) return it->second == v;
    sub.fm.emplace(k, v);
    log.emplace_back(Cat::Fm, k);
    return true;
  }
  bool bind_prop(const std::string& k, const Formula& v) {
    auto it = sub.prop.find(k);
    if (it != sub.prop.end()) return it->second == v;
    sub.prop.emplace(k, v);
    log.emplace_back(Cat::Prop, k);
    return true;
  }
  bool bind_succ(const std::string& k, const std::optional<Formula>& v) {
    auto it = sub.succ.find(k);
    if (it != sub.succ.end()) {
      if (it->second.has_value() != v.has_value()) return false;
      return !v || *it->second == *v;
    }
    sub.succ.emplace(k, v);
    log.emplace_back(Cat::Succ, k);
    return true;
  }
};

bool match_pat_formula(const PatFormula& p, const Formula& f, Trail& tr) {
  switch (p.kind()) {
    case PatFormula::Kind::FmVar: return tr.bind_fm(p.name(), f);
    case PatFormula::Kind::PropVar: return f.is_var() && tr.bind_prop(p.name(), f);
    case PatFormula::Kind::Const: return f.is_const() && f.conn() == p.conn();
    case PatFormula::Kind::Bin: {
      if (!f.is_bin() || f.conn() != p.conn()) return false;
      std::size_t m = tr.mark();
      if (match_pat_formula(p.left(), f.left(), tr) &&
          match_pat_formula(p.right(), f.right(), tr))
        return true;
      tr.undo(m);
      return false;
    }
  }
  return false;
}

bool match_items(const std::vector<PatItem>& items, std::size_t k,
                 const std::vector<Formula>& t, std::size_t j, Trail& tr,
                 const std::function<bool()>& done) {
  if (k == items.size()) return j == t.size() ? done() : false;
  const PatItem& it = items[k];
  if (it.kind == PatItem::Kind::Fm) {
    if (j >= t.size()) return false;
    std::size_t m = tr.mark();
    if (match_pat_formula(it.fm, t[j], tr)) {
      if (match_items(items, k + 1, t, j + 1, tr, done)) return true;
    }
    tr.undo(m);
    return false;
  }
  // Sequence metavariable: already bound means a fixed segment; fresh means
  // try every split of the remaining suffix.
  auto bound = tr.sub.seq.find(it.seqvar);
  if (bound != tr.sub.seq.end()) {
    const std::vector<Formula>& seg = bound->second;
    if (j + seg.size() > t.size()) return false;
    for (std::size_t i = 0; i < seg.size(); ++i)
      if (!(t[j + i] == seg[i])) return false;
    return match_items(items, k + 1, t, j + seg.size(), tr, done);
  }
  for (std::size_t len = 0; j + len <= t.size(); ++len) {
    std::size_t m = tr.mark();
    std::vector<Formula> seg(t.begin() + static_cast<std::ptrdiff_t>(j),
                             t.begin() + static_cast<std::ptrdiff_t>(j + len));
    if (tr.bind_seq(it.seqvar, std::move(seg))) {
      if (match_items(items, k + 1, t, j + len, tr, done)) return true;
    }
    tr.undo(m);
  }
  return false;
}

bool match_succedent(const SequentPattern& p, const Sequent& s, Trail& tr) {
  switch (p.succ_kind) {
    case SequentPattern::Succ::Empty: return !s.succedent.has_value();
    case SequentPattern::Succ::Var: return tr.bind_succ(p.succ_var, s.succedent);
    case SequentPattern::Succ::Fm:
      return s.succedent.has_value() && match_pat_formula(p.succ_fm, *s.succedent, tr);
  }
  return false;
}

} // namespace

Sequent instantiate(const SequentPattern& p, const Substitution& sub) {
  Sequent s;
  for (const PatItem& it : p.antecedent) {
    if (it.kind == PatItem::Kind::SeqVar) {
      auto found = sub.seq.find(it.seqvar);
      if (found == sub.seq.end())
        throw InternalInvariantViolated("instantiate: unbound sequence metavariable " +
                                        it.seqvar);
      s.antecedent.insert(s.antecedent.end(), found->second.begin(), found->second.end());
    } else {
      s.antecedent.push_back(subst_formula(it.fm, sub));
    }
  }
  switch (p.succ_kind) {
    case SequentPattern::Succ::Empty: break;
    case SequentPattern::Succ::Var: {
      auto found = sub.succ.find(p.succ_var);
      if (found == sub.succ.end())
        throw InternalInvariantViolated("instantiate: unbound succedent metavariable " +
                                        p.succ_var);
      s.succedent = found->second;
      break;
    }
    case SequentPattern::Succ::Fm: s.succedent = subst_formula(p.succ_fm, sub); break;
  }
  return s;
}

bool match_pattern(const SequentPattern& p, const Sequent& s, Substitution& sub,
                   const std::function<bool(Substitution&)>& yield) {
  Trail tr(sub);
  std::size_t m = tr.mark();
  bool stopped = false;
  if (match_succedent(p, s, tr)) {
    stopped = match_items(p.antecedent, 0, s.antecedent, 0, tr,
                          [&]() { return yield(sub); });
  }
  tr.undo(m);
  return stopped;
}

std::optional<Substitution> match_instance(const RuleSchema& r,
                                           std::span<const Sequent> premises,
                                           const Sequent& conclusion) {
  if (premises.size() != r.premises.size()) return std::nullopt;
  Substitution sub;
  std::optional<Substitution> result;

  // Depth-first over conclusion then premises, all sharing one substitution.
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == r.premises.size()) {
      result = sub;
      return true;
    }
    return match_pattern(r.premises[i], premises[i], sub,
                         [&](Substitution&) { return go(i + 1); });
  };
  match_pattern(r.conclusion, conclusion, sub, [&](Substitution&) { return go(0); });
  return result;
}

namespace {
void collect_fm_names(const SequentPattern& p, std::set<std::string>& out) {
  std::function<void(const PatFormula&)> walk = [&](const PatFormula& f) {
    switch (f.kind()) {
      case PatFormula::Kind::FmVar: out.insert(f.name()); break;
      case PatFormula::Kind::Bin:
        walk(f.left());
        walk(f.right());
        break;
      default: break;
    }
  };
  for (const PatItem& it : p.antecedent)
    if (it.kind == PatItem::Kind::Fm) walk(it.fm);
  if (p.succ_kind == SequentPattern::Succ::Fm) walk(p.succ_fm);
}
} // namespace

std::vector<std::string> premise_only_fm_metavars(const RuleSchema& r) {
  std::set<std::string> in_prem, in_concl;
  for (const SequentPattern& p : r.premises) collect_fm_names(p, in_prem);
  collect_fm_names(r.conclusion, in_concl);
  std::vector<std::string> out;
  for (const std::string& n : in_prem)
    if (!in_concl.count(n)) out.push_back(n);
  return out;
}

} // namespace flw
