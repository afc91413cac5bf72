#include "flw/sequent.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace flw {

namespace {
std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
} // namespace

bool Sequent::operator==(const Sequent& other) const {
  if (succedent.has_value() != other.succedent.has_value()) return false;
  if (succedent && !(*succedent == *other.succedent)) return false;
  return antecedent == other.antecedent;
}

std::size_t Sequent::hash() const {
  std::size_t h = 0x5E0;
  for (const Formula& f : antecedent) h = hash_mix(h, f.hash());
  h = hash_mix(h, succedent ? succedent->hash() : 0x717);
  return h;
}

std::size_t Sequent::size_tokens() const {
  std::size_t n = 1; // turnstile
  for (const Formula& f : antecedent) n += f.size_tokens();
  if (antecedent.size() > 1) n += antecedent.size() - 1; // commas
  if (succedent) n += succedent->size_tokens();
  return n;
}

std::string Sequent::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += ',';
    out += antecedent[i].to_string();
  }
  if (!antecedent.empty()) out += ' ';
  out += "|-";
  if (succedent) {
    out += ' ';
    out += succedent->to_string();
  }
  return out;
}

bool Sequent::canonical_less(const Sequent& a, const Sequent& b) {
  // Succedent first (empty before anything), then antecedent lexicographically.
  if (a.succedent.has_value() != b.succedent.has_value())
    return !a.succedent.has_value();
  if (a.succedent && !(*a.succedent == *b.succedent))
    return Formula::canonical_less(*a.succedent, *b.succedent);
  auto na = a.antecedent.size(), nb = b.antecedent.size();
  for (std::size_t i = 0; i < std::min(na, nb); ++i) {
    if (!(a.antecedent[i] == b.antecedent[i]))
      return Formula::canonical_less(a.antecedent[i], b.antecedent[i]);
  }
  return na < nb;
}

Sequent parse_sequent(const std::string& text) {
  // '|' occurs only in the turnstile, ',' never occurs inside a formula, so a
  // textual split is safe before delegating to the formula parser.
  std::size_t t = text.find("|-");
  if (t == std::string::npos) throw ParseError("sequent is missing '|-': " + text);
  if (text.find("|-", t + 2) != std::string::npos)
    throw ParseError("sequent has more than one '|-': " + text);
  Sequent s;
  std::string lhs = text.substr(0, t);
  std::string rhs = trim(text.substr(t + 2));
  if (!trim(lhs).empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t comma = lhs.find(',', start);
      std::string piece = comma == std::string::npos ? lhs.substr(start)
                                                     : lhs.substr(start, comma - start);
      if (trim(piece).empty())
        throw ParseError("empty antecedent entry in sequent: " + text);
      s.antecedent.push_back(parse_formula(piece));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (!rhs.empty()) s.succedent = parse_formula(rhs);
  return s;
}

Theory parse_theory(const std::string& text) {
  Theory t;
  std::unordered_set<std::size_t> seen_hashes;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    if (trim(line).empty()) continue;
    Sequent s;
    try {
      s = parse_sequent(line);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    bool dup = false;
    for (const Sequent& prev : t)
      if (prev == s) { dup = true; break; }
    if (!dup) t.push_back(std::move(s));
  }
  return t;
}

std::string print_theory(const Theory& t) {
  std::string out;
  for (const Sequent& s : t) {
    out += s.to_string();
    out += '\n';
  }
  return out;
}

Formula fold_fusion(std::span<const Formula> items, Fragment frag) {
  if (items.empty()) {
    frag.require(Conn::One, "fold_fusion");
    return Formula::constant(Conn::One);
  }
  frag.require(Conn::Fuse, "fold_fusion");
  Formula acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;)
    acc = Formula::bin(Conn::Fuse, items[i], acc);
  return acc;
}

namespace {
void flatten_rec(const Formula& root, const Formula& f, std::vector<std::string>& out) {
  if (f.is_var()) {
    out.push_back(f.name());
    return;
  }
  if (f.is_bin() && f.conn() == Conn::Fuse) {
    flatten_rec(root, f.left(), out);
    flatten_rec(root, f.right(), out);
    return;
  }
  throw NotFlattenable("flatten: not a fusion of variables: " + root.to_string());
}
} // namespace

std::vector<std::string> flatten(const Formula& f) {
  std::vector<std::string> out;
  if (f.is_const() && f.conn() == Conn::One) return out; // unit folds to nothing
  flatten_rec(f, f, out);
  return out;
}

std::vector<Formula> subformula_closure(std::span<const Sequent> seqs) {
  std::vector<Formula> all;
  for (const Sequent& s : seqs) {
    for (const Formula& f : s.antecedent) collect_subformulas(f, all);
    if (s.succedent) collect_subformulas(*s.succedent, all);
  }
  std::sort(all.begin(), all.end(), Formula::canonical_less);
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Formula& a, const Formula& b) { return a == b; }),
            all.end());
  return all;
}

std::size_t size_sum(std::span<const Sequent> seqs) {
  std::size_t n = 0;
  for (const Sequent& s : seqs) n += s.size_tokens();
  return n;
}

std::size_t size_max(std::span<const Sequent> seqs) {
  std::size_t n = 0;
  for (const Sequent& s : seqs) n = std::max(n, s.size_tokens());
  return n;
}

Formula translate_sequent(const Sequent& s, Fragment frag) {
  Formula body;
  if (s.antecedent.empty()) {
    frag.require(Conn::One, "translate_sequent");
    body = Formula::constant(Conn::One);
  } else {
    body = fold_fusion(s.antecedent, frag);
  }
  Formula head;
  if (s.succedent) {
    head = *s.succedent;
  } else {
    frag.require(Conn::Zero, "translate_sequent");
    head = Formula::constant(Conn::Zero);
  }
  frag.require(Conn::Under, "translate_sequent");
  return Formula::bin(Conn::Under, body, head);
}

Theory translate_theory(const Theory& t, Fragment frag) {
  Theory out;
  for (const Sequent& s : t) {
    Sequent axiom;
    axiom.succedent = translate_sequent(s, frag);
    bool dup = false;
    for (const Sequent& prev : out)
      if (prev == axiom) { dup = true; break; }
    if (!dup) out.push_back(std::move(axiom));
  }
  return out;
}

std::vector<std::string> restrict_to(std::span<const std::string> names,
                                     std::span<const std::string> keep) {
  std::vector<std::string> out;
  for (const std::string& n : names)
    if (std::find(keep.begin(), keep.end(), n) != keep.end()) out.push_back(n);
  return out;
}

} // namespace flw
