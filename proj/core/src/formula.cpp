#include "flw/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace flw {

const char* conn_token(Conn c) {
  switch (c) {
    case Conn::Zero: return "0";
    case Conn::One: return "1";
    case Conn::Top: return "top";
    case Conn::Bot: return "bot";
    case Conn::Fuse: return "*";
    case Conn::And: return "/\\";
    case Conn::Or: return "\\/";
    case Conn::Under: return "\\";
    case Conn::Over: return "/";
  }
  throw InternalInvariantViolated("conn_token: bad connective");
}

Fragment Fragment::full() {
  Fragment f;
  f.mask = static_cast<std::uint16_t>((1u << kConnCount) - 1u);
  return f;
}

Fragment Fragment::of(std::initializer_list<Conn> cs) {
  Fragment f;
  for (Conn c : cs) f.add(c);
  return f;
}

void Fragment::require(Conn c, const std::string& who) const {
  if (!has(c))
    throw MissingConnective(who + ": connective '" + conn_token(c) +
                            "' is not in the active fragment");
}

std::vector<Conn> Fragment::connectives() const {
  std::vector<Conn> out;
  for (int i = 0; i < kConnCount; ++i)
    if ((mask >> i) & 1u) out.push_back(static_cast<Conn>(i));
  return out;
}

namespace {
struct FragName {
  const char* name;
  Conn conn;
};
// Canonical names first; single-char aliases after.
constexpr FragName kFragNames[] = {
    {"0", Conn::Zero},    {"1", Conn::One},    {"top", Conn::Top},
    {"bot", Conn::Bot},   {"fus", Conn::Fuse}, {"and", Conn::And},
    {"or", Conn::Or},     {"ldiv", Conn::Under}, {"rdiv", Conn::Over},
    {"*", Conn::Fuse},    {"/\\", Conn::And},  {"\\/", Conn::Or},
    {"\\", Conn::Under},  {"/", Conn::Over},
};
} // namespace

std::string Fragment::to_string() const {
  if (*this == Fragment::full()) return "full";
  if (mask == 0) return "none";
  std::string out;
  for (const auto& fn : kFragNames) {
    if (std::string(fn.name).size() > 0 && !std::isalnum(static_cast<unsigned char>(fn.name[0])))
      continue; // aliases are not canonical
    if (has(fn.conn)) {
      if (!out.empty()) out += ",";
      out += fn.name;
    }
  }
  return out;
}

Fragment parse_fragment(const std::string& text) {
  Fragment f;
  std::string tok;
  auto flush = [&](const std::string& t) {
    if (t.empty()) return;
    if (t == "full") {
      f = Fragment::full();
      return;
    }
    if (t == "none") return;
    for (const auto& fn : kFragNames) {
      if (t == fn.name) {
        f.add(fn.conn);
        return;
      }
    }
    throw ParseError("unknown fragment name '" + t + "'");
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush(tok);
      tok.clear();
    } else {
      tok += ch;
    }
  }
  flush(tok);
  return f;
}

// ---------------------------------------------------------------------------
// Formula nodes

namespace {
std::size_t hash_mix(std::size_t a, std::size_t b) {
  // boost-style combiner; adequate for hash tables, not cryptographic.
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}
} // namespace

Formula Formula::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->conn = Conn::Zero;
  n->name = std::move(name);
  n->hash = hash_mix(0x5651, std::hash<std::string>{}(n->name));
  n->size = 1;
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::constant(Conn c) {
  if (!conn_is_constant(c))
    throw InternalInvariantViolated("Formula::constant: not a constant");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->conn = c;
  n->hash = hash_mix(0xC057, static_cast<std::size_t>(c));
  n->size = 1;
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::bin(Conn c, Formula left, Formula right) {
  if (conn_is_constant(c))
    throw InternalInvariantViolated("Formula::bin: constant used as binary");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bin;
  n->conn = c;
  n->left = std::move(left);
  n->right = std::move(right);
  n->hash = hash_mix(static_cast<std::size_t>(c) + 0xB1A5,
                     hash_mix(n->left.hash(), n->right.hash()));
  n->size = n->left.size_tokens() + n->right.size_tokens() + 3;
  Formula f;
  f.node_ = std::move(n);
  return f;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->hash != other.node_->hash || node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Var: return node_->name == other.node_->name;
    case Kind::Const: return node_->conn == other.node_->conn;
    case Kind::Bin:
      return node_->conn == other.node_->conn && node_->left == other.node_->left &&
             node_->right == other.node_->right;
  }
  return false;
}

namespace {
void render(const Formula& f, bool top, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Var: out += f.name(); return;
    case Formula::Kind::Const: out += conn_token(f.conn()); return;
    case Formula::Kind::Bin:
      if (!top) out += '(';
      render(f.left(), false, out);
      out += conn_token(f.conn());
      render(f.right(), false, out);
      if (!top) out += ')';
      return;
  }
}
} // namespace

std::string Formula::to_string() const {
  std::string out;
  render(*this, true, out);
  return out;
}

bool Formula::canonical_less(const Formula& a, const Formula& b) {
  if (a.size_tokens() != b.size_tokens()) return a.size_tokens() < b.size_tokens();
  return a.to_string() < b.to_string();
}

// ---------------------------------------------------------------------------
// Lexer + recursive-descent parser for the explicit-parentheses grammar.

namespace {

enum class TokKind { Ident, Const0, Const1, ConstTop, ConstBot, Op, LParen, RParen, Comma, Turnstile, End };

struct Token {
  TokKind kind;
  Conn op = Conn::Fuse; // for Op
  std::string text;
  std::size_t pos = 0;
};

struct Lexer {
  const std::string& src;
  std::size_t i = 0;
  explicit Lexer(const std::string& s) : src(s) {}

  Token next() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    if (i >= src.size()) return {TokKind::End, Conn::Fuse, "", i};
    std::size_t start = i;
    char c = src[i];
    // two-char operators first: /\ \/ |-
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '\\') {
      i += 2;
      return {TokKind::Op, Conn::And, "/\\", start};
    }
    if (c == '\\' && i + 1 < src.size() && src[i + 1] == '/') {
      i += 2;
      return {TokKind::Op, Conn::Or, "\\/", start};
    }
    if (c == '|' && i + 1 < src.size() && src[i + 1] == '-') {
      i += 2;
      return {TokKind::Turnstile, Conn::Fuse, "|-", start};
    }
    switch (c) {
      case '*': ++i; return {TokKind::Op, Conn::Fuse, "*", start};
      case '\\': ++i; return {TokKind::Op, Conn::Under, "\\", start};
      case '/': ++i; return {TokKind::Op, Conn::Over, "/", start};
      case '(': ++i; return {TokKind::LParen, Conn::Fuse, "(", start};
      case ')': ++i; return {TokKind::RParen, Conn::Fuse, ")", start};
      case ',': ++i; return {TokKind::Comma, Conn::Fuse, ",", start};
      case '0': ++i; return {TokKind::Const0, Conn::Zero, "0", start};
      case '1': ++i; return {TokKind::Const1, Conn::One, "1", start};
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      i = j;
      if (word == "top") return {TokKind::ConstTop, Conn::Top, word, start};
      if (word == "bot") return {TokKind::ConstBot, Conn::Bot, word, start};
      return {TokKind::Ident, Conn::Fuse, word, start};
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                     std::to_string(i) + " in: " + src);
  }
};

struct FormulaParser {
  Lexer lex;
  Token cur;
  explicit FormulaParser(const std::string& s) : lex(s) { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError(why + " at offset " + std::to_string(cur.pos) + " in: " + lex.src);
  }

  Formula atom() {
    switch (cur.kind) {
      case TokKind::Ident: {
        Formula f = Formula::var(cur.text);
        advance();
        return f;
      }
      case TokKind::Const0: advance(); return Formula::constant(Conn::Zero);
      case TokKind::Const1: advance(); return Formula::constant(Conn::One);
      case TokKind::ConstTop: advance(); return Formula::constant(Conn::Top);
      case TokKind::ConstBot: advance(); return Formula::constant(Conn::Bot);
      case TokKind::LParen: {
        advance();
        Formula f = formula();
        if (cur.kind != TokKind::RParen) fail("expected ')'");
        advance();
        return f;
      }
      default: fail("expected a formula");
    }
  }

  // formula := atom (op atom)?   — chains require explicit parentheses.
  Formula formula() {
    Formula l = atom();
    if (cur.kind != TokKind::Op) return l;
    Conn op = cur.op;
    advance();
    Formula r = atom();
    if (cur.kind == TokKind::Op)
      fail("operator chain needs explicit parentheses");
    return Formula::bin(op, l, r);
  }
};

} // namespace

Formula parse_formula(const std::string& text) {
  FormulaParser p(text);
  Formula f = p.formula();
  if (p.cur.kind != TokKind::End) p.fail("trailing input after formula");
  return f;
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  out.push_back(f);
  if (f.is_bin()) {
    collect_subformulas(f.left(), out);
    collect_subformulas(f.right(), out);
  }
}

Fragment connectives_of(const Formula& f) {
  Fragment frag;
  if (f.is_const()) frag.add(f.conn());
  if (f.is_bin()) {
    frag.add(f.conn());
    frag.mask |= connectives_of(f.left()).mask;
    frag.mask |= connectives_of(f.right()).mask;
  }
  return frag;
}

} // namespace flw
