#include "flw/derivation.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace flw {

Derivation Derivation::theory_leaf(Sequent s) {
  Derivation d;
  d.just = Just::TheoryLeaf;
  d.sequent = std::move(s);
  return d;
}

Derivation Derivation::rule_node(std::string rule, Sequent concl,
                                 std::vector<Derivation> children,
                                 std::optional<Substitution> subst) {
  Derivation d;
  d.just = Just::Rule;
  d.rule = std::move(rule);
  d.sequent = std::move(concl);
  d.children = std::move(children);
  d.subst = std::move(subst);
  return d;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const Derivation& c : children) n += c.node_count();
  return n;
}

std::string CheckReport::summary() const {
  std::string out = std::string("valid=") + (valid ? "yes" : "no") +
                    " standard=" + (standard ? "yes" : "no") +
                    " analytic=" + (analytic ? "yes" : "no");
  for (const auto& [path, why] : violations)
    out += "\n  [" + (path.empty() ? "root" : path) + "] " + why;
  return out;
}

namespace {

void check_node(const Calculus& c, const Theory& t, const Derivation& d,
                const std::vector<Formula>& phi, const std::string& path,
                CheckReport& rep) {
  auto flag = [&](bool& field, const std::string& why) {
    field = false;
    rep.violations.emplace_back(path, why);
  };

  // Analyticity: every formula of this node's sequent is in the alphabet.
  auto in_phi = [&](const Formula& f) {
    return std::find(phi.begin(), phi.end(), f) != phi.end();
  };
  for (const Formula& f : d.sequent.antecedent)
    if (!in_phi(f)) {
      flag(rep.analytic, "formula outside alphabet: " + f.to_string());
      break;
    }
  if (d.sequent.succedent && !in_phi(*d.sequent.succedent))
    flag(rep.analytic, "succedent outside alphabet: " + d.sequent.succedent->to_string());

  if (d.just == Derivation::Just::TheoryLeaf) {
    if (!d.children.empty())
      flag(rep.valid, "theory leaf with children");
    if (std::find(t.begin(), t.end(), d.sequent) == t.end())
      flag(rep.valid, "sequent not in the theory: " + d.sequent.to_string());
    return;
  }

  const RuleSchema* schema = c.find(d.rule);
  if (!schema) {
    flag(rep.valid, "unknown rule '" + d.rule + "'");
  } else if (d.children.size() != schema->premises.size()) {
    flag(rep.valid, "rule '" + d.rule + "' expects " +
                        std::to_string(schema->premises.size()) + " premises, got " +
                        std::to_string(d.children.size()));
  } else if (d.subst) {
    // A stored substitution must reproduce premises and conclusion exactly.
    bool ok = true;
    try {
      for (std::size_t i = 0; i < d.children.size(); ++i)
        if (!(instantiate(schema->premises[i], *d.subst) == d.children[i].sequent))
          ok = false;
      if (!(instantiate(schema->conclusion, *d.subst) == d.sequent)) ok = false;
    } catch (const InternalInvariantViolated&) {
      ok = false;
    }
    if (!ok) flag(rep.valid, "stored substitution does not reproduce the instance");
  } else {
    std::vector<Sequent> prem;
    prem.reserve(d.children.size());
    for (const Derivation& ch : d.children) prem.push_back(ch.sequent);
    if (!match_instance(*schema, prem, d.sequent))
      flag(rep.valid, "not an instance of rule '" + d.rule + "'");
  }

  // Standardness: a cut is standard when its left premise is a theory leaf.
  if (d.rule == "cut" && d.children.size() == 2 &&
      d.children[0].just != Derivation::Just::TheoryLeaf)
    flag(rep.standard, "cut left premise is not a theory leaf");

  for (std::size_t i = 0; i < d.children.size(); ++i)
    check_node(c, t, d.children[i], phi,
               path.empty() ? std::to_string(i) : path + "." + std::to_string(i), rep);
}

} // namespace

CheckReport check_deduction(const Calculus& c, const Theory& t, const Derivation& d,
                            const std::vector<Formula>* phi) {
  std::vector<Formula> closure;
  if (!phi) {
    std::vector<Sequent> all(t.begin(), t.end());
    all.push_back(d.sequent);
    closure = subformula_closure(all);
    phi = &closure;
  }
  CheckReport rep;
  check_node(c, t, d, *phi, "", rep);
  return rep;
}

bool is_regular(const Theory& t) {
  for (const Sequent& s : t) {
    if (!s.succedent) return false;
    for (const Formula& f : s.antecedent)
      if (!f.is_var()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// S-expression I/O

namespace {

struct SexprParser {
  const std::string& src;
  std::size_t i = 0;
  explicit SexprParser(const std::string& s) : src(s) {}

  void skip_ws() {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) {
        ++i;
      } else if (src[i] == ';') { // comment to end of line
        while (i < src.size() && src[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError(why + " at offset " + std::to_string(i) + " in derivation file");
  }

  void expect(char c) {
    skip_ws();
    if (i >= src.size() || src[i] != c) fail(std::string("expected '") + c + "'");
    ++i;
  }

  bool peek(char c) {
    skip_ws();
    return i < src.size() && src[i] == c;
  }

  std::string quoted() {
    skip_ws();
    if (i >= src.size() || src[i] != '"') fail("expected a quoted sequent");
    ++i;
    std::string out;
    while (i < src.size() && src[i] != '"') out += src[i++];
    if (i >= src.size()) fail("unterminated string");
    ++i;
    return out;
  }

  std::string symbol() {
    skip_ws();
    std::string out;
    while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) &&
           src[i] != '(' && src[i] != ')')
      out += src[i++];
    if (out.empty()) fail("expected a rule name");
    return out;
  }

  Derivation node() {
    expect('(');
    std::string head = symbol();
    Derivation d;
    if (head == "theory") {
      d = Derivation::theory_leaf(parse_sequent(quoted()));
    } else if (head == "node") {
      std::string seq_text = quoted();
      std::string rule = symbol();
      std::vector<Derivation> children;
      while (peek('(')) children.push_back(node());
      d = Derivation::rule_node(rule, parse_sequent(seq_text), std::move(children));
    } else {
      fail("expected 'node' or 'theory', got '" + head + "'");
    }
    expect(')');
    return d;
  }
};

void print_node(const Derivation& d, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  if (d.just == Derivation::Just::TheoryLeaf) {
    out += "(theory \"" + d.sequent.to_string() + "\")";
    return;
  }
  out += "(node \"" + d.sequent.to_string() + "\" " + d.rule;
  for (const Derivation& c : d.children) {
    out += '\n';
    print_node(c, indent + 1, out);
  }
  out += ')';
}

} // namespace

Derivation parse_derivation(const std::string& text) {
  SexprParser p(text);
  Derivation d = p.node();
  p.skip_ws();
  if (p.i != text.size()) p.fail("trailing input after derivation");
  return d;
}

std::string print_derivation(const Derivation& d) {
  std::string out;
  print_node(d, 0, out);
  out += '\n';
  return out;
}

} // namespace flw
