// Saturation engines (anchored and literal), deduction reconstruction from
// provenance, the exhaustive bounded-closure cross-check, and the certified
// bounds report.
#include "flw/saturate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace flw {

namespace {

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

void add_unique(std::vector<std::string>& v, const std::string& n) {
  if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
}

struct MetaVars {
  std::vector<std::string> seq, fm, prop, succ; // first-occurrence order
};

void scan_pat_formula(const PatFormula& p, MetaVars& mv) {
  switch (p.kind()) {
  case PatFormula::Kind::FmVar: add_unique(mv.fm, p.name()); break;
  case PatFormula::Kind::PropVar: add_unique(mv.prop, p.name()); break;
  case PatFormula::Kind::Const: break;
  case PatFormula::Kind::Bin:
    scan_pat_formula(p.left(), mv);
    scan_pat_formula(p.right(), mv);
    break;
  }
}

void scan_pattern(const SequentPattern& sp, MetaVars& mv) {
  for (const PatItem& it : sp.antecedent) {
    if (it.kind == PatItem::Kind::SeqVar)
      add_unique(mv.seq, it.seqvar);
    else
      scan_pat_formula(it.fm, mv);
  }
  if (sp.succ_kind == SequentPattern::Succ::Var)
    add_unique(mv.succ, sp.succ_var);
  else if (sp.succ_kind == SequentPattern::Succ::Fm)
    scan_pat_formula(sp.succ_fm, mv);
}

MetaVars rule_metavars(const RuleSchema& r) {
  MetaVars mv;
  for (const SequentPattern& p : r.premises) scan_pattern(p, mv);
  scan_pattern(r.conclusion, mv);
  return mv;
}

bool pat_equal(const PatFormula& a, const PatFormula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case PatFormula::Kind::FmVar:
  case PatFormula::Kind::PropVar: return a.name() == b.name();
  case PatFormula::Kind::Const: return a.conn() == b.conn();
  case PatFormula::Kind::Bin:
    return a.conn() == b.conn() && pat_equal(a.left(), b.left()) &&
           pat_equal(a.right(), b.right());
  }
  return false;
}

bool item_equal(const PatItem& a, const PatItem& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PatItem::Kind::SeqVar) return a.seqvar == b.seqvar;
  return pat_equal(a.fm, b.fm);
}

bool succ_equal(const SequentPattern& a, const SequentPattern& b) {
  if (a.succ_kind != b.succ_kind) return false;
  if (a.succ_kind == SequentPattern::Succ::Var) return a.succ_var == b.succ_var;
  if (a.succ_kind == SequentPattern::Succ::Fm) return pat_equal(a.succ_fm, b.succ_fm);
  return true;
}

// A premise whose item list is a subsequence of the conclusion's with the same
// succedent pattern makes every conclusion instance cover that premise
// instance, so such rules can never contribute a new minimal element.
bool always_subsumed(const RuleSchema& r) {
  for (const SequentPattern& p : r.premises) {
    if (!succ_equal(p, r.conclusion)) continue;
    std::size_t i = 0;
    for (std::size_t j = 0; i < p.antecedent.size() && j < r.conclusion.antecedent.size();
         ++j)
      if (item_equal(p.antecedent[i], r.conclusion.antecedent[j])) ++i;
    if (i == p.antecedent.size()) return true;
  }
  return false;
}

// How an fm/prop metavariable occurs in the conclusion pattern.
struct ConclOcc {
  bool top_ant = false;    // bare item in the antecedent
  bool succ_top = false;   // the whole succedent
  bool under_conn = false; // inside a binary pattern
};

void scan_occurrence(const PatFormula& p, bool top, const std::string& name, ConclOcc& o,
                     bool in_succ) {
  switch (p.kind()) {
  case PatFormula::Kind::FmVar:
  case PatFormula::Kind::PropVar:
    if (p.name() == name) {
      if (!top)
        o.under_conn = true;
      else if (in_succ)
        o.succ_top = true;
      else
        o.top_ant = true;
    }
    break;
  case PatFormula::Kind::Const: break;
  case PatFormula::Kind::Bin:
    scan_occurrence(p.left(), false, name, o, in_succ);
    scan_occurrence(p.right(), false, name, o, in_succ);
    break;
  }
}

ConclOcc conclusion_occurrence(const RuleSchema& r, const std::string& name) {
  ConclOcc o;
  for (const PatItem& it : r.conclusion.antecedent)
    if (it.kind == PatItem::Kind::Fm)
      scan_occurrence(it.fm, true, name, o, false);
  if (r.conclusion.succ_kind == SequentPattern::Succ::Fm)
    scan_occurrence(r.conclusion.succ_fm, true, name, o, true);
  return o;
}

// ---------------------------------------------------------------- fills

struct FillSlot {
  enum class Kind : std::uint8_t { Fm, Prop, Succ } kind;
  std::string name;
};

// Enumerates alphabet assignments for the given slots on top of sub.
void enumerate_fills(const std::vector<FillSlot>& slots, std::size_t k,
                     const std::vector<Formula>& phi, const std::vector<Formula>& vars,
                     Substitution& sub, const std::function<void()>& leaf) {
  if (k == slots.size()) {
    leaf();
    return;
  }
  const FillSlot& sl = slots[k];
  switch (sl.kind) {
  case FillSlot::Kind::Fm:
    for (const Formula& f : phi) {
      sub.fm[sl.name] = f;
      enumerate_fills(slots, k + 1, phi, vars, sub, leaf);
    }
    sub.fm.erase(sl.name);
    break;
  case FillSlot::Kind::Prop:
    for (const Formula& f : vars) {
      sub.prop[sl.name] = f;
      enumerate_fills(slots, k + 1, phi, vars, sub, leaf);
    }
    sub.prop.erase(sl.name);
    break;
  case FillSlot::Kind::Succ:
    sub.succ[sl.name] = std::nullopt;
    enumerate_fills(slots, k + 1, phi, vars, sub, leaf);
    for (const Formula& f : phi) {
      sub.succ[sl.name] = f;
      enumerate_fills(slots, k + 1, phi, vars, sub, leaf);
    }
    sub.succ.erase(sl.name);
    break;
  }
}

// Whether the premise items selected by `keep` form a pattern subsequence of
// the conclusion's items with the same succedent pattern. When they do, every
// conclusion instance contains the instantiation of the kept items as a
// subword, hence also covers any anchor matched into only those items.
bool remainder_covered(const SequentPattern& prem, const SequentPattern& concl,
                       const std::function<bool(std::size_t)>& keep) {
  if (!succ_equal(prem, concl)) return false;
  std::size_t ci = 0;
  for (std::size_t i = 0; i < prem.antecedent.size(); ++i) {
    if (!keep(i)) continue;
    while (ci < concl.antecedent.size() &&
           !item_equal(prem.antecedent[i], concl.antecedent[ci]))
      ++ci;
    if (ci == concl.antecedent.size()) return false;
    ++ci;
  }
  return true;
}

// A formula item for which matching as a free slot is useless: with the item
// deleted the rest of the premise still lands inside the conclusion, so the
// conclusion would cover its own anchor. Such items must consume a formula.
bool deletion_covered(const SequentPattern& prem, std::size_t drop,
                      const SequentPattern& concl) {
  return remainder_covered(prem, concl,
                           [&](std::size_t i) { return i != drop; });
}

// Same idea with every formula item free at once: when only the sequence
// metavariables survive into the conclusion in order, a match consuming no
// formula at all yields a conclusion covering its anchor.
bool all_free_covered(const SequentPattern& prem, const SequentPattern& concl) {
  bool has_fm = false;
  for (const PatItem& it : prem.antecedent)
    if (it.kind == PatItem::Kind::Fm) has_fm = true;
  if (!has_fm) return false;
  return remainder_covered(prem, concl, [&](std::size_t i) {
    return prem.antecedent[i].kind != PatItem::Kind::Fm;
  });
}

// -------------------------------------------------------- interned sequents

// Inside the engine a sequent over the alphabet is a succedent id (0 = empty,
// otherwise the 1-based alphabet index) plus the antecedent as an id word.
// The alphabet is stored in canonical formula order, so comparing ids is
// comparing formulas canonically.
using IdVec = std::vector<std::uint32_t>;

bool word_embed_ids(const IdVec& a, const IdVec& b) {
  std::size_t i = 0;
  for (std::size_t j = 0; i < a.size() && j < b.size(); ++j)
    if (a[i] == b[j]) ++i;
  return i == a.size();
}

// Mirrors Sequent::canonical_less through the reflection: empty succedent
// first, then succedent id, then the antecedent lexicographically.
bool ids_less(std::uint32_t sa, const IdVec& a, std::uint32_t sb, const IdVec& b) {
  if ((sa == 0) != (sb == 0)) return sa == 0;
  if (sa != sb) return sa < sb;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return a.size() < b.size();
}

// ------------------------------------------------- minimal common superwords

// All minimal words every member of ws embeds into, by advancing all words
// that share the chosen next letter; duplicates and non-minimal extras are
// filtered afterwards.
std::vector<IdVec> minimal_common_superwords(const std::vector<const IdVec*>& ws) {
  std::vector<IdVec> out;
  std::vector<std::size_t> p(ws.size(), 0);
  IdVec acc;
  std::function<void()> dfs = [&] {
    bool done = true;
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (p[i] < ws[i]->size()) done = false;
    if (done) {
      out.push_back(acc);
      if (out.size() > 4096)
        throw BudgetExceeded("shared-context join produced too many candidates", 0, 0);
      return;
    }
    IdVec heads;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (p[i] >= ws[i]->size()) continue;
      std::uint32_t h = (*ws[i])[p[i]];
      if (std::find(heads.begin(), heads.end(), h) == heads.end()) heads.push_back(h);
    }
    for (std::uint32_t x : heads) {
      std::vector<std::size_t> saved = p;
      for (std::size_t i = 0; i < ws.size(); ++i)
        if (p[i] < ws[i]->size() && (*ws[i])[p[i]] == x) ++p[i];
      acc.push_back(x);
      dfs();
      acc.pop_back();
      p = saved;
    }
  };
  dfs();
  // dedupe, then keep only the embedding-minimal words
  std::vector<IdVec> uniq;
  for (const auto& w : out)
    if (std::find(uniq.begin(), uniq.end(), w) == uniq.end()) uniq.push_back(w);
  std::vector<IdVec> min;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < uniq.size() && !dominated; ++j)
      if (j != i && word_embed_ids(uniq[j], uniq[i])) dominated = true;
    if (!dominated) min.push_back(uniq[i]);
  }
  return min;
}

// ---------------------------------------------------------------- the engine

struct Candidate {
  Sequent sequent;
  std::uint32_t succ = 0;
  IdVec ids;
  Provenance prov;
  std::size_t depth = 0;
};

struct Engine {
  Calculus calc;
  Theory theory;
  SequentOrder ord;
  SaturationConfig cfg;
  SaturationState st;
  std::vector<Formula> phi_vars;
  std::chrono::steady_clock::time_point t0;
  std::uint64_t work = 0;
  std::size_t current_round = 0;

  // interned reflection of every admitted sequent, parallel to st.admitted;
  // all embedding and subsumption checks run on these
  std::vector<IdVec> aids;
  std::vector<std::uint32_t> asucc;

  // per alphabet id, the structure of its formula (index 0 unused)
  struct PhiNode {
    std::uint8_t kind = 0; // 0 variable, 1 constant, 2 binary
    Conn conn{};
    std::uint32_t l = 0, r = 0;
  };
  std::vector<PhiNode> pnode;
  std::vector<std::uint32_t> var_ids;                       // ids of variables
  std::unordered_map<std::uint64_t, std::uint32_t> bin_ids; // (conn,l,r) -> id
  std::unordered_set<std::uint64_t> bin_left, bin_right;    // (conn,child)
  std::unordered_set<std::uint8_t> any_bin;                 // conns with a binary
  std::unordered_map<std::uint8_t, std::uint32_t> const_ids;

  static std::uint64_t pack3(Conn c, std::uint32_t l, std::uint32_t r) {
    return (std::uint64_t(static_cast<std::uint8_t>(c)) << 56) |
           (std::uint64_t(l) << 28) | r;
  }
  static std::uint64_t pack2(Conn c, std::uint32_t x) {
    return (std::uint64_t(static_cast<std::uint8_t>(c)) << 56) | x;
  }

  // liveness per admitted index (false once evicted from the frontier)
  std::vector<char> alive;
  // per alphabet id, the admitted indices whose antecedent mentions it; grown
  // on admission, filtered through `alive` when scanned
  std::vector<std::vector<std::size_t>> by_ant;

  // Open-addressing set over (succedent, antecedent-word) keys, stored in one
  // arena.  Holds every sequent ever pushed to the passive queue plus every
  // emission already rejected as covered: coverage only ever grows, so a
  // covered sequent stays covered and exact repeats die with one probe.
  struct KeySet {
    std::vector<std::uint64_t> hash;     // 0 marks an empty slot
    std::vector<std::uint32_t> off, len; // arena span per slot
    IdVec arena;                         // succ word followed by the antecedent
    std::size_t used = 0;
    std::uint64_t mask = 0;

    KeySet() {
      hash.assign(1 << 16, 0);
      off.assign(1 << 16, 0);
      len.assign(1 << 16, 0);
      mask = (1 << 16) - 1;
    }

    static std::uint64_t mix(std::uint32_t succ, const IdVec& w) {
      std::uint64_t h = 1469598103934665603ull ^ succ;
      for (std::uint32_t x : w) {
        h ^= x;
        h *= 1099511628211ull;
      }
      h ^= h >> 29;
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 32;
      return h ? h : 1;
    }

    void grow() {
      std::vector<std::uint64_t> oh = std::move(hash);
      std::vector<std::uint32_t> oo = std::move(off), ol = std::move(len);
      std::size_t n = oh.size() * 2;
      mask = n - 1;
      hash.assign(n, 0);
      off.assign(n, 0);
      len.assign(n, 0);
      for (std::size_t j = 0; j < oh.size(); ++j) {
        if (!oh[j]) continue;
        std::size_t i = oh[j] & mask;
        while (hash[i]) i = (i + 1) & mask;
        hash[i] = oh[j];
        off[i] = oo[j];
        len[i] = ol[j];
      }
    }

    // true when the key was absent and has now been added
    bool insert(std::uint32_t succ, const IdVec& w) {
      if (used * 2 >= hash.size()) grow();
      std::uint64_t h = mix(succ, w);
      std::size_t i = h & mask;
      while (hash[i]) {
        if (hash[i] == h && len[i] == w.size() + 1 && arena[off[i]] == succ &&
            std::equal(w.begin(), w.end(), arena.begin() + off[i] + 1))
          return false;
        i = (i + 1) & mask;
      }
      hash[i] = h;
      off[i] = static_cast<std::uint32_t>(arena.size());
      len[i] = static_cast<std::uint32_t>(w.size() + 1);
      arena.push_back(succ);
      arena.insert(arena.end(), w.begin(), w.end());
      ++used;
      return true;
    }
  };
  KeySet queued;
  // ceiling on one inference step's growth: a conclusion never needs more
  // antecedent items than all its premise instances and the rule text supply
  std::uint64_t step_growth = 0;

  // Passive candidates waiting for admission, popped smallest-norm first
  // (canonical order among equals) so covers exist before what they cover.
  std::vector<Candidate> passive;
  struct PassiveCmp {
    const Engine* e;
    bool operator()(std::size_t x, std::size_t y) const {
      const Candidate& a = e->passive[x];
      const Candidate& b = e->passive[y];
      if (a.ids.size() != b.ids.size()) return a.ids.size() > b.ids.size();
      if (ids_less(a.succ, a.ids, b.succ, b.ids)) return false;
      if (ids_less(b.succ, b.ids, a.succ, a.ids)) return true;
      return x > y;
    }
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, PassiveCmp> heap{
      PassiveCmp{this}};
  IdVec wscratch;  // reused buffer for candidate conclusions
  IdKey kscratch;  // reused key for de-duplication lookups

  std::optional<std::pair<std::uint32_t, IdVec>> to_ids(const Sequent& s) const {
    std::uint32_t sc = 0;
    if (s.succedent) {
      auto it = ord.ids.find(*s.succedent);
      if (it == ord.ids.end()) return std::nullopt;
      sc = static_cast<std::uint32_t>(it->second);
    }
    IdVec w;
    w.reserve(s.antecedent.size());
    for (const Formula& f : s.antecedent) {
      auto it = ord.ids.find(f);
      if (it == ord.ids.end()) return std::nullopt;
      w.push_back(static_cast<std::uint32_t>(it->second));
    }
    return std::make_pair(sc, std::move(w));
  }

  Sequent from_ids(std::uint32_t succ, const IdVec& w) const {
    Sequent s;
    s.antecedent.reserve(w.size());
    for (std::uint32_t id : w) s.antecedent.push_back(ord.phi[id - 1]);
    if (succ) s.succedent = ord.phi[succ - 1];
    return s;
  }

  // The live frontier, bucketed by succedent (0 = empty) with each bucket in
  // ascending norm order: only same-succedent elements of norm <= n can embed
  // into a norm-n sequent, and only ones of norm > n can be evicted by it.
  // One bit per id class; mask(t) & ~mask(w) != 0 proves t cannot embed in w,
  // so most frontier elements are rejected with two comparisons on contiguous
  // arrays before any embedding walk.
  static std::uint64_t word_mask(const IdVec& w) {
    std::uint64_t m = 0;
    for (std::uint32_t x : w) m |= std::uint64_t{1} << (x & 63);
    return m;
  }

  struct BucketedFrontier {
    struct Bucket { // parallel arrays, sorted by antecedent length
      std::vector<std::size_t> idx;
      std::vector<std::uint32_t> len;
      std::vector<std::uint64_t> mask;
    };
    std::vector<Bucket> buckets;
    std::size_t count = 0;

    bool covers(const Engine& e, std::uint32_t succ, const IdVec& w) const {
      const Bucket& b = buckets[succ];
      std::uint64_t wm = word_mask(w);
      for (std::size_t i = 0; i < b.idx.size(); ++i) {
        if (b.len[i] > w.size()) break;
        if (b.mask[i] & ~wm) continue;
        if (word_embed_ids(e.aids[b.idx[i]], w)) return true;
      }
      return false;
    }

    struct InsertResult {
      bool inserted = false;
      std::vector<std::size_t> removed;
    };

    InsertResult insert(const Engine& e, std::size_t idx) {
      const IdVec& w = e.aids[idx];
      std::uint64_t wm = word_mask(w);
      Bucket& b = buckets[e.asucc[idx]];
      std::size_t pos = 0;
      for (; pos < b.idx.size() && b.len[pos] <= w.size(); ++pos)
        if (!(b.mask[pos] & ~wm) && word_embed_ids(e.aids[b.idx[pos]], w))
          return {};
      InsertResult res;
      res.inserted = true;
      std::size_t keep = pos;
      for (std::size_t i = pos; i < b.idx.size(); ++i) {
        if (!(wm & ~b.mask[i]) && word_embed_ids(w, e.aids[b.idx[i]])) {
          res.removed.push_back(b.idx[i]);
        } else {
          b.idx[keep] = b.idx[i];
          b.len[keep] = b.len[i];
          b.mask[keep] = b.mask[i];
          ++keep;
        }
      }
      b.idx.resize(keep);
      b.len.resize(keep);
      b.mask.resize(keep);
      b.idx.insert(b.idx.begin() + pos, idx);
      b.len.insert(b.len.begin() + pos, static_cast<std::uint32_t>(w.size()));
      b.mask.insert(b.mask.begin() + pos, wm);
      count += 1;
      count -= res.removed.size();
      return res;
    }

    std::size_t size() const { return count; }

    std::vector<std::size_t> elements() const {
      std::vector<std::size_t> out;
      out.reserve(count);
      for (const Bucket& b : buckets)
        out.insert(out.end(), b.idx.begin(), b.idx.end());
      return out;
    }
  };

  BucketedFrontier front;

  Engine(const Calculus& c, const Theory& t, std::span<const Formula> alphabet,
         const SaturationConfig& config)
      : calc(c), theory(t),
        ord(std::vector<Formula>(alphabet.begin(), alphabet.end())), cfg(config) {
    if (!is_regular(theory)) throw NotRegular("saturation needs a regular theory");
    for (const Sequent& s : theory)
      if (!ord.is_phi_sequent(s))
        throw InvalidInput("alphabet must contain every theory formula: " +
                           s.to_string());
    for (const Formula& f : ord.phi)
      if (f.is_bin() && (!ord.contains(f.left()) || !ord.contains(f.right())))
        throw InvalidInput("alphabet must be closed under subformulas: " +
                           f.to_string());
    for (const Formula& f : ord.phi)
      if (f.is_var()) phi_vars.push_back(f);
    if (cfg.engine == SaturationConfig::Engine::Literal) {
      for (const RuleSchema& r : calc.rules) {
        if (r.is_axiom()) continue;
        MetaVars concl;
        scan_pattern(r.conclusion, concl);
        MetaVars all = rule_metavars(r);
        for (const std::string& g : all.seq)
          if (std::find(concl.seq.begin(), concl.seq.end(), g) == concl.seq.end())
            throw InvalidInput("literal engine: rule '" + r.name +
                               "' has a premise-only sequence metavariable");
        for (const std::string& x : all.succ)
          if (std::find(concl.succ.begin(), concl.succ.end(), x) == concl.succ.end())
            throw InvalidInput("literal engine: rule '" + r.name +
                               "' has a premise-only succedent metavariable");
      }
    }
    st.calculus = calc;
    st.theory = theory;
    st.alphabet = ord.phi;
    front.buckets.assign(ord.phi.size() + 1, {});
    by_ant.assign(ord.phi.size() + 1, {});
    step_growth = saturating_mul(calc.size_tokens(), calc.size_tokens());
    pnode.assign(ord.phi.size() + 1, {});
    for (std::size_t i = 0; i < ord.phi.size(); ++i) {
      const Formula& f = ord.phi[i];
      std::uint32_t id = static_cast<std::uint32_t>(i + 1);
      PhiNode& n = pnode[id];
      if (f.is_var()) {
        n.kind = 0;
        var_ids.push_back(id);
      } else if (f.is_const()) {
        n.kind = 1;
        n.conn = f.conn();
        const_ids.emplace(static_cast<std::uint8_t>(f.conn()), id);
      } else {
        n.kind = 2;
        n.conn = f.conn();
        n.l = static_cast<std::uint32_t>(ord.id_of(f.left()));
        n.r = static_cast<std::uint32_t>(ord.id_of(f.right()));
        bin_ids.emplace(pack3(n.conn, n.l, n.r), id);
        bin_left.insert(pack2(n.conn, n.l));
        bin_right.insert(pack2(n.conn, n.r));
        any_bin.insert(static_cast<std::uint8_t>(n.conn));
      }
    }
  }

  void tick() {
    if ((++work & 0x3FFu) != 0) return;
    using namespace std::chrono;
    double el = duration<double>(steady_clock::now() - t0).count();
    if (el > cfg.time_budget_s)
      throw BudgetExceeded("saturation wall-clock budget exceeded", current_round,
                           front.size());
  }

  bool snap_covers(const std::vector<std::size_t>& snap, const Sequent& s) const {
    for (std::size_t i : snap)
      if (seq_embed(st.admitted[i], s)) return true;
    return false;
  }

  // Admits one candidate against the live frontier; keeps the logs parallel.
  std::optional<std::size_t> admit(Sequent s, std::uint32_t succ, IdVec ids,
                                   Provenance pv, std::size_t round) {
    st.admitted.push_back(std::move(s));
    asucc.push_back(succ);
    aids.push_back(std::move(ids));
    std::size_t idx = st.admitted.size() - 1;
    auto out = front.insert(*this, idx);
    if (!out.inserted) {
      st.admitted.pop_back();
      asucc.pop_back();
      aids.pop_back();
      return std::nullopt;
    }
    st.admitted_round.push_back(round);
    if (cfg.record_provenance) st.provenance.push_back(std::move(pv));
    alive.push_back(1);
    for (std::size_t ri : out.removed) alive[ri] = 0;
    IdVec distinct;
    for (std::uint32_t id : aids[idx])
      if (std::find(distinct.begin(), distinct.end(), id) == distinct.end()) {
        distinct.push_back(id);
        by_ant[id].push_back(idx);
      }
    st.stats.evictions += out.removed.size();
    st.stats.max_norm = std::max(st.stats.max_norm, norm(st.admitted[idx]));
    if (st.admitted.size() > cfg.frontier_budget)
      throw BudgetExceeded("saturation frontier budget exceeded", current_round,
                           front.size());
    return idx;
  }

  // Deterministic batch admission: smallest norms first so that short
  // sequents admitted early reject the longer ones they cover within the same
  // batch, canonical order among equals.
  std::size_t admit_batch(std::vector<Candidate>& batch, std::size_t round) {
    std::sort(batch.begin(), batch.end(), [](const Candidate& a, const Candidate& b) {
      if (norm(a.sequent) != norm(b.sequent))
        return norm(a.sequent) < norm(b.sequent);
      return Sequent::canonical_less(a.sequent, b.sequent);
    });
    std::size_t n = 0;
    for (Candidate& c : batch) {
      auto ii = to_ids(c.sequent);
      if (!ii) continue;
      if (admit(std::move(c.sequent), ii->first, std::move(ii->second),
                std::move(c.prov), round))
        ++n;
    }
    return n;
  }

  void collect_initial(std::vector<Candidate>& batch) {
    auto push = [&](Sequent s, Provenance pv) {
      auto ii = to_ids(s);
      if (!ii) return;
      if (!queued.insert(IdKey{ii->first, ii->second}).second) return;
      Candidate c;
      c.sequent = std::move(s);
      c.succ = ii->first;
      c.ids = std::move(ii->second);
      c.prov = std::move(pv);
      batch.push_back(std::move(c));
    };
    for (const Sequent& s : theory)
      push(s, Provenance{Provenance::Kind::Theory, "", std::nullopt, {}});
    for (const RuleSchema& r : calc.rules) {
      if (!r.is_axiom()) continue;
      MetaVars mv;
      scan_pattern(r.conclusion, mv);
      Substitution sub;
      for (const std::string& g : mv.seq) sub.seq[g] = {};
      std::vector<FillSlot> slots;
      for (const std::string& n : mv.fm) slots.push_back({FillSlot::Kind::Fm, n});
      for (const std::string& n : mv.prop) slots.push_back({FillSlot::Kind::Prop, n});
      for (const std::string& n : mv.succ) slots.push_back({FillSlot::Kind::Succ, n});
      enumerate_fills(slots, 0, ord.phi, phi_vars, sub, [&] {
        tick();
        push(instantiate(r.conclusion, sub),
             Provenance{Provenance::Kind::Axiom, r.name, sub, {}});
      });
    }
  }

  std::size_t build_initial() {
    std::vector<Candidate> batch;
    collect_initial(batch);
    return admit_batch(batch, 0);
  }

  // ------------------------------------------------------ anchored matching
  //
  // Matching, instance resolution, and conclusion construction all run on the
  // interned representation; formulas are only materialized when a candidate
  // actually enters the passive queue.

  struct IdPat {
    enum class K : std::uint8_t { Fm, Prop, Const, Bin } k = K::Fm;
    Conn conn{};
    std::uint16_t slot = 0;
    std::int32_t l = -1, r = -1;
  };
  struct IdItem {
    bool is_seq = false;
    std::uint16_t slot = 0; // sequence slot when is_seq
    std::int32_t pat = -1;  // pattern index otherwise
  };
  struct IdSeqPat {
    std::vector<IdItem> items;
    SequentPattern::Succ succ_kind = SequentPattern::Succ::Empty;
    std::uint16_t succ_slot = 0;
    std::int32_t succ_pat = -1;
  };

  // Per-rule matching data computed once: compiled patterns, metavariable
  // slot tables, the conclusion's formula slots (for alphabet-realizability
  // forward checks), must-consume marks per premise item, and whether a
  // premise must consume at least one anchor formula overall.
  struct RulePlan {
    const RuleSchema* rule = nullptr;
    std::vector<IdPat> pool;
    std::vector<IdSeqPat> prem;
    IdSeqPat concl;
    std::vector<std::int32_t> concl_fms;
    std::vector<std::vector<bool>> no_free;
    std::vector<char> require_consume;
    std::vector<std::string> seq_names, fm_names, prop_names, succ_names;
    std::vector<std::uint8_t> fm_fill, prop_fill; // 1 = enumerate the alphabet
  };
  std::vector<RulePlan> plans;

  static std::uint16_t slot_of(std::vector<std::string>& names, const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<std::uint16_t>(i);
    names.push_back(n);
    return static_cast<std::uint16_t>(names.size() - 1);
  }

  std::int32_t compile_pat(RulePlan& pl, const PatFormula& p) {
    IdPat q;
    switch (p.kind()) {
    case PatFormula::Kind::FmVar:
      q.k = IdPat::K::Fm;
      q.slot = slot_of(pl.fm_names, p.name());
      break;
    case PatFormula::Kind::PropVar:
      q.k = IdPat::K::Prop;
      q.slot = slot_of(pl.prop_names, p.name());
      break;
    case PatFormula::Kind::Const:
      q.k = IdPat::K::Const;
      q.conn = p.conn();
      break;
    case PatFormula::Kind::Bin:
      q.k = IdPat::K::Bin;
      q.conn = p.conn();
      q.l = compile_pat(pl, p.left());
      q.r = compile_pat(pl, p.right());
      break;
    }
    pl.pool.push_back(q);
    return static_cast<std::int32_t>(pl.pool.size() - 1);
  }

  IdSeqPat compile_seqpat(RulePlan& pl, const SequentPattern& sp) {
    IdSeqPat out;
    for (const PatItem& it : sp.antecedent) {
      IdItem item;
      if (it.kind == PatItem::Kind::SeqVar) {
        item.is_seq = true;
        item.slot = slot_of(pl.seq_names, it.seqvar);
      } else {
        item.pat = compile_pat(pl, it.fm);
      }
      out.items.push_back(item);
    }
    out.succ_kind = sp.succ_kind;
    if (sp.succ_kind == SequentPattern::Succ::Var)
      out.succ_slot = slot_of(pl.succ_names, sp.succ_var);
    else if (sp.succ_kind == SequentPattern::Succ::Fm)
      out.succ_pat = compile_pat(pl, sp.succ_fm);
    return out;
  }

  void build_plans() {
    for (const RuleSchema& r : calc.rules) {
      if (r.is_axiom() || always_subsumed(r)) continue;
      RulePlan pl;
      pl.rule = &r;
      for (const SequentPattern& p : r.premises)
        pl.prem.push_back(compile_seqpat(pl, p));
      pl.concl = compile_seqpat(pl, r.conclusion);
      for (const IdItem& it : pl.concl.items)
        if (!it.is_seq) pl.concl_fms.push_back(it.pat);
      if (pl.concl.succ_kind == SequentPattern::Succ::Fm)
        pl.concl_fms.push_back(pl.concl.succ_pat);
      // premise items whose free-slot matches only ever produce conclusions
      // covered by their own anchor must consume an anchor formula, and a
      // premise whose sequence-variable skeleton already sits inside the
      // conclusion must consume at least one formula somewhere
      pl.no_free.resize(r.premises.size());
      for (std::size_t j = 0; j < r.premises.size(); ++j) {
        pl.no_free[j].assign(r.premises[j].antecedent.size(), false);
        for (std::size_t i = 0; i < r.premises[j].antecedent.size(); ++i)
          if (r.premises[j].antecedent[i].kind == PatItem::Kind::Fm)
            pl.no_free[j][i] = deletion_covered(r.premises[j], i, r.conclusion);
        pl.require_consume.push_back(
            all_free_covered(r.premises[j], r.conclusion) ? 1 : 0);
      }
      for (const std::string& n : pl.fm_names) {
        ConclOcc o = conclusion_occurrence(r, n);
        pl.fm_fill.push_back((o.top_ant || o.succ_top || o.under_conn) ? 1 : 0);
      }
      for (const std::string& n : pl.prop_names) {
        ConclOcc o = conclusion_occurrence(r, n);
        pl.prop_fill.push_back((o.top_ant || o.succ_top || o.under_conn) ? 1 : 0);
      }
      plans.push_back(std::move(pl));
    }
  }

  struct Span {
    const std::uint32_t* p = nullptr;
    std::uint32_t n = 0;
  };

  struct IdCtx {
    std::vector<std::uint32_t> fm, prop; // 0 = unbound
    std::vector<std::int32_t> succ;      // -1 unbound; else 0 = empty or an id
    std::vector<std::vector<Span>> seg;  // collected spans per sequence slot
    std::vector<IdVec> seqw;             // resolved words per sequence slot
    std::vector<std::size_t> anchors;
    std::vector<std::uint16_t> fm_trail, prop_trail, succ_trail;
  };

  struct IdMark {
    std::size_t fm, prop, succ;
  };

  static IdMark mark(const IdCtx& c) {
    return {c.fm_trail.size(), c.prop_trail.size(), c.succ_trail.size()};
  }

  static void rewind(IdCtx& c, const IdMark& m) {
    while (c.fm_trail.size() > m.fm) {
      c.fm[c.fm_trail.back()] = 0;
      c.fm_trail.pop_back();
    }
    while (c.prop_trail.size() > m.prop) {
      c.prop[c.prop_trail.back()] = 0;
      c.prop_trail.pop_back();
    }
    while (c.succ_trail.size() > m.succ) {
      c.succ[c.succ_trail.back()] = -1;
      c.succ_trail.pop_back();
    }
  }

  bool match_idpat(const RulePlan& pl, IdCtx& c, std::int32_t pi, std::uint32_t id) {
    const IdPat& p = pl.pool[pi];
    switch (p.k) {
    case IdPat::K::Fm:
      if (c.fm[p.slot]) return c.fm[p.slot] == id;
      c.fm[p.slot] = id;
      c.fm_trail.push_back(p.slot);
      return true;
    case IdPat::K::Prop:
      if (pnode[id].kind != 0) return false;
      if (c.prop[p.slot]) return c.prop[p.slot] == id;
      c.prop[p.slot] = id;
      c.prop_trail.push_back(p.slot);
      return true;
    case IdPat::K::Const:
      return pnode[id].kind == 1 && pnode[id].conn == p.conn;
    case IdPat::K::Bin: {
      if (pnode[id].kind != 2 || pnode[id].conn != p.conn) return false;
      IdMark m = mark(c);
      if (match_idpat(pl, c, p.l, pnode[id].l) &&
          match_idpat(pl, c, p.r, pnode[id].r))
        return true;
      rewind(c, m);
      return false;
    }
    }
    return false;
  }

  // 0 = not fully bound, or the instantiated formula is not in the alphabet.
  std::uint32_t inst_id(const RulePlan& pl, const IdCtx& c, std::int32_t pi) const {
    const IdPat& p = pl.pool[pi];
    switch (p.k) {
    case IdPat::K::Fm: return c.fm[p.slot];
    case IdPat::K::Prop: return c.prop[p.slot];
    case IdPat::K::Const: {
      auto it = const_ids.find(static_cast<std::uint8_t>(p.conn));
      return it == const_ids.end() ? 0 : it->second;
    }
    case IdPat::K::Bin: {
      std::uint32_t l = inst_id(pl, c, p.l);
      if (!l) return 0;
      std::uint32_t r = inst_id(pl, c, p.r);
      if (!r) return 0;
      auto it = bin_ids.find(pack3(p.conn, l, r));
      return it == bin_ids.end() ? 0 : it->second;
    }
    }
    return 0;
  }

  // Forward check: can this pattern still land on an alphabet formula under
  // the bindings made so far?
  bool could_realize(const RulePlan& pl, const IdCtx& c, std::int32_t pi) const {
    const IdPat& p = pl.pool[pi];
    switch (p.k) {
    case IdPat::K::Fm: return c.fm[p.slot] != 0 || !ord.phi.empty();
    case IdPat::K::Prop: return c.prop[p.slot] != 0 || !var_ids.empty();
    case IdPat::K::Const:
      return const_ids.count(static_cast<std::uint8_t>(p.conn)) != 0;
    case IdPat::K::Bin: {
      if (!could_realize(pl, c, p.l) || !could_realize(pl, c, p.r)) return false;
      std::uint32_t l = inst_id(pl, c, p.l), r = inst_id(pl, c, p.r);
      if (l && r) return bin_ids.count(pack3(p.conn, l, r)) != 0;
      if (l) return bin_left.count(pack2(p.conn, l)) != 0;
      if (r) return bin_right.count(pack2(p.conn, r)) != 0;
      return any_bin.count(static_cast<std::uint8_t>(p.conn)) != 0;
    }
    }
    return false;
  }

  // Every way an instance of premise j can cover the admitted anchor fi: the
  // succedent is matched exactly; each anchor antecedent formula lands either
  // in a sequence-slot span or on a matched formula slot; formula slots may
  // also stay free (their value comes from the final substitution) unless
  // no_free marks them as must-consume.  With `need` set, matches consuming
  // no anchor formula at all are dropped: their conclusions only repeat the
  // anchor weakened, which the anchor itself already covers.
  template <class K>
  void match_prem_ids(const RulePlan& pl, IdCtx& c, std::size_t j, std::size_t fi,
                      const K& k) {
    const IdSeqPat& P = pl.prem[j];
    std::uint32_t ssucc = asucc[fi];
    IdMark m0 = mark(c);
    bool ok = true;
    switch (P.succ_kind) {
    case SequentPattern::Succ::Empty: ok = ssucc == 0; break;
    case SequentPattern::Succ::Var:
      if (c.succ[P.succ_slot] >= 0) {
        ok = c.succ[P.succ_slot] == static_cast<std::int32_t>(ssucc);
      } else {
        c.succ[P.succ_slot] = static_cast<std::int32_t>(ssucc);
        c.succ_trail.push_back(P.succ_slot);
      }
      break;
    case SequentPattern::Succ::Fm:
      ok = ssucc != 0 && match_idpat(pl, c, P.succ_pat, ssucc);
      break;
    }
    if (ok)
      ant_dfs_ids(pl, c, P, 0, aids[fi], 0, pl.no_free[j],
                  pl.require_consume[j] != 0, k);
    rewind(c, m0);
  }

  template <class K>
  void ant_dfs_ids(const RulePlan& pl, IdCtx& c, const IdSeqPat& P, std::size_t ii,
                   const IdVec& w, std::size_t pos, const std::vector<bool>& no_free,
                   bool need, const K& k) {
    tick();
    if (ii == P.items.size()) {
      if (pos == w.size() && !need) k();
      return;
    }
    const IdItem& it = P.items[ii];
    if (it.is_seq) {
      for (std::size_t take = 0; pos + take <= w.size(); ++take) {
        c.seg[it.slot].push_back({w.data() + pos, static_cast<std::uint32_t>(take)});
        ant_dfs_ids(pl, c, P, ii + 1, w, pos + take, no_free, need, k);
        c.seg[it.slot].pop_back();
      }
      return;
    }
    if (pos < w.size()) {
      IdMark m = mark(c);
      if (match_idpat(pl, c, it.pat, w[pos]))
        ant_dfs_ids(pl, c, P, ii + 1, w, pos + 1, no_free, false, k);
      rewind(c, m);
    }
    if (no_free[ii]) return;
    ant_dfs_ids(pl, c, P, ii + 1, w, pos, no_free, need, k); // free slot
  }

  // Resolves sequence slots (joining shared spans into minimal common
  // superwords), then fills any still-unbound slot from the alphabet, and
  // hands each complete binding to `emit`.
  template <class E>
  void enum_fills_ids(IdCtx& c,
                      const std::vector<std::pair<std::uint8_t, std::uint16_t>>& slots,
                      std::size_t k, const E& emit) {
    if (k == slots.size()) {
      emit();
      return;
    }
    auto [kind, sl] = slots[k];
    if (kind == 0) {
      for (std::uint32_t id = 1; id <= ord.phi.size(); ++id) {
        c.fm[sl] = id;
        enum_fills_ids(c, slots, k + 1, emit);
      }
      c.fm[sl] = 0;
    } else if (kind == 1) {
      for (std::uint32_t id : var_ids) {
        c.prop[sl] = id;
        enum_fills_ids(c, slots, k + 1, emit);
      }
      c.prop[sl] = 0;
    } else {
      for (std::int32_t v = 0; v <= static_cast<std::int32_t>(ord.phi.size()); ++v) {
        c.succ[sl] = v;
        enum_fills_ids(c, slots, k + 1, emit);
      }
      c.succ[sl] = -1;
    }
  }

  template <class E>
  void resolve_ids(const RulePlan& pl, IdCtx& c, const E& emit) {
    std::size_t nseq = pl.seq_names.size();
    std::vector<std::vector<IdVec>> choices(nseq);
    for (std::size_t v = 0; v < nseq; ++v) {
      const std::vector<Span>& occ = c.seg[v];
      if (occ.empty()) {
        choices[v] = {IdVec{}};
      } else if (occ.size() == 1) {
        choices[v] = {IdVec(occ[0].p, occ[0].p + occ[0].n)};
      } else {
        std::vector<IdVec> words;
        words.reserve(occ.size());
        for (const Span& s : occ) words.emplace_back(s.p, s.p + s.n);
        std::vector<const IdVec*> ptrs;
        ptrs.reserve(words.size());
        for (const IdVec& w : words) ptrs.push_back(&w);
        choices[v] = minimal_common_superwords(ptrs);
      }
    }
    std::function<void(std::size_t)> assign = [&](std::size_t v) {
      if (v == nseq) {
        bool viable = true;
        std::vector<std::pair<std::uint8_t, std::uint16_t>> slots;
        std::vector<std::uint16_t> back_fm, back_prop;
        for (std::uint16_t i = 0; i < pl.fm_names.size(); ++i)
          if (!c.fm[i]) {
            if (pl.fm_fill[i]) {
              slots.push_back({0, i});
            } else if (!ord.phi.empty()) {
              c.fm[i] = 1; // conclusion-independent backstop: first formula
              back_fm.push_back(i);
            } else {
              viable = false;
            }
          }
        for (std::uint16_t i = 0; i < pl.prop_names.size(); ++i)
          if (viable && !c.prop[i]) {
            if (var_ids.empty()) {
              viable = false;
            } else if (pl.prop_fill[i]) {
              slots.push_back({1, i});
            } else {
              c.prop[i] = var_ids.front();
              back_prop.push_back(i);
            }
          }
        for (std::uint16_t i = 0; i < pl.succ_names.size(); ++i)
          if (c.succ[i] < 0) slots.push_back({2, i});
        if (viable) enum_fills_ids(c, slots, 0, emit);
        for (std::uint16_t i : back_fm) c.fm[i] = 0;
        for (std::uint16_t i : back_prop) c.prop[i] = 0;
        return;
      }
      for (const IdVec& w : choices[v]) {
        c.seqw[v] = w;
        assign(v + 1);
      }
      c.seqw[v].clear();
      return;
    };
    assign(0);
  }

  bool build_concl(const RulePlan& pl, const IdCtx& c, std::uint32_t& succ,
                   IdVec& w) const {
    w.clear();
    for (const IdItem& it : pl.concl.items) {
      if (it.is_seq) {
        const IdVec& s = c.seqw[it.slot];
        w.insert(w.end(), s.begin(), s.end());
      } else {
        std::uint32_t id = inst_id(pl, c, it.pat);
        if (!id) return false;
        w.push_back(id);
      }
    }
    switch (pl.concl.succ_kind) {
    case SequentPattern::Succ::Empty: succ = 0; break;
    case SequentPattern::Succ::Var:
      succ = static_cast<std::uint32_t>(c.succ[pl.concl.succ_slot]);
      break;
    case SequentPattern::Succ::Fm: {
      std::uint32_t id = inst_id(pl, c, pl.concl.succ_pat);
      if (!id) return false;
      succ = id;
      break;
    }
    }
    return true;
  }

  Substitution sub_of(const RulePlan& pl, const IdCtx& c) const {
    Substitution sub;
    for (std::size_t i = 0; i < pl.seq_names.size(); ++i) {
      std::vector<Formula> w;
      w.reserve(c.seqw[i].size());
      for (std::uint32_t id : c.seqw[i]) w.push_back(ord.phi[id - 1]);
      sub.seq[pl.seq_names[i]] = std::move(w);
    }
    for (std::size_t i = 0; i < pl.fm_names.size(); ++i)
      sub.fm[pl.fm_names[i]] = ord.phi[c.fm[i] - 1];
    for (std::size_t i = 0; i < pl.prop_names.size(); ++i)
      sub.prop[pl.prop_names[i]] = ord.phi[c.prop[i] - 1];
    for (std::size_t i = 0; i < pl.succ_names.size(); ++i)
      sub.succ[pl.succ_names[i]] =
          c.succ[i] == 0 ? std::optional<Formula>{}
                         : std::optional<Formula>{ord.phi[c.succ[i] - 1]};
    return sub;
  }

  void push_passive(Candidate c) {
    passive.push_back(std::move(c));
    heap.push(passive.size() - 1);
  }

  // Expands every rule instance in which the just-admitted element `xi` is
  // the newest anchor: position p carries xi, earlier positions range over
  // strictly older live elements, later ones over live elements up to xi.
  // Each instance over surviving anchors is thus tried exactly when its
  // youngest anchor arrives, and instances lost to eviction are recovered by
  // the covering element's own expansions.
  void expand_from(std::size_t xi) {
    for (const RulePlan& pl : plans) {
      const RuleSchema& r = *pl.rule;
      std::size_t nprem = pl.prem.size();
      for (std::size_t p = 0; p < nprem; ++p) {
        IdCtx c;
        c.fm.assign(pl.fm_names.size(), 0);
        c.prop.assign(pl.prop_names.size(), 0);
        c.succ.assign(pl.succ_names.size(), -1);
        c.seg.assign(pl.seq_names.size(), {});
        c.seqw.assign(pl.seq_names.size(), {});
        c.anchors.assign(nprem, 0);
        std::function<void(std::size_t)> per_premise = [&](std::size_t j) {
          // forward check: every conclusion formula must still be realizable
          // within the alphabet under the bindings made so far
          for (std::int32_t pi2 : pl.concl_fms)
            if (!could_realize(pl, c, pi2)) return;
          if (j == nprem) {
            resolve_ids(pl, c, [&] {
              tick();
              std::uint32_t csucc = 0;
              if (!build_concl(pl, c, csucc, wscratch)) return;
              std::size_t depth = 0, maxa = 1;
              for (std::size_t q = 0; q < nprem; ++q) {
                depth = std::max(depth, st.admitted_round[c.anchors[q]]);
                maxa = std::max(maxa, aids[c.anchors[q]].size());
              }
              depth += 1;
              if (wscratch.size() > saturating_mul(step_growth, maxa)) return;
              for (std::size_t q = 0; q < nprem; ++q)
                if (asucc[c.anchors[q]] == csucc &&
                    word_embed_ids(aids[c.anchors[q]], wscratch))
                  return;
              kscratch.succ = csucc;
              kscratch.ant = wscratch; // assignment reuses the buffer
              if (queued.count(kscratch)) return;
              if (front.covers(*this, csucc, wscratch)) return;
              Candidate cd;
              cd.sequent = from_ids(csucc, wscratch);
              cd.succ = csucc;
              cd.ids = wscratch;
              cd.depth = depth;
              cd.prov = Provenance{Provenance::Kind::Step, r.name, std::nullopt, {}};
              if (cfg.record_provenance) {
                Substitution sub = sub_of(pl, c);
                for (std::size_t q = 0; q < nprem; ++q)
                  cd.prov.premises.emplace_back(c.anchors[q],
                                                instantiate(r.premises[q], sub));
              }
              queued.insert(kscratch);
              push_passive(std::move(cd));
            });
            return;
          }
          if (j == p) {
            c.anchors[j] = xi;
            match_prem_ids(pl, c, j, xi, [&] { per_premise(j + 1); });
            return;
          }
          // the most selective posting list consistent with the bound parts
          // of this premise pattern; null pool means every live element
          const IdSeqPat& P = pl.prem[j];
          const std::vector<std::size_t>* pool = nullptr;
          auto narrow = [&](const std::vector<std::size_t>& cand) {
            if (!pool || cand.size() < pool->size()) pool = &cand;
          };
          switch (P.succ_kind) {
          case SequentPattern::Succ::Empty: narrow(front.buckets[0].idx); break;
          case SequentPattern::Succ::Var:
            if (c.succ[P.succ_slot] >= 0)
              narrow(front.buckets[c.succ[P.succ_slot]].idx);
            break;
          case SequentPattern::Succ::Fm:
            if (std::uint32_t id = inst_id(pl, c, P.succ_pat))
              narrow(front.buckets[id].idx);
            break;
          }
          for (std::size_t i = 0; i < P.items.size(); ++i) {
            // only must-consume items constrain the anchor's antecedent: a
            // free slot can realize any other bound item without the anchor
            // mentioning its value
            if (P.items[i].is_seq || !pl.no_free[j][i]) continue;
            if (std::uint32_t id = inst_id(pl, c, P.items[i].pat))
              narrow(by_ant[id]);
          }
          auto scan = [&](const std::vector<std::size_t>& v) {
            for (std::size_t fi : v) {
              if (j < p ? fi >= xi : fi > xi) continue;
              if (!alive[fi]) continue;
              c.anchors[j] = fi;
              match_prem_ids(pl, c, j, fi, [&] { per_premise(j + 1); });
            }
          };
          if (pool) {
            scan(*pool);
          } else {
            for (const auto& b : front.buckets) scan(b.idx);
          }
        };
        per_premise(0);
      }
    }
  }

  void given_clause() {
    build_plans();
    st.stats.admissions_per_round.assign(1, 0);
    std::vector<Candidate> init;
    collect_initial(init);
    for (Candidate& c : init) push_passive(std::move(c));
    bool trace = std::getenv("FLW_SAT_TRACE") != nullptr;
    while (!heap.empty()) {
      std::size_t pi = heap.top();
      heap.pop();
      tick();
      Candidate& cand = passive[pi];
      if (front.covers(*this, cand.succ, cand.ids)) {
        cand = Candidate{};
        continue;
      }
      current_round = cand.depth;
      std::size_t depth = cand.depth;
      auto idx = admit(std::move(cand.sequent), cand.succ, std::move(cand.ids),
                       std::move(cand.prov), depth);
      cand = Candidate{};
      if (!idx) continue;
      if (depth >= st.stats.admissions_per_round.size())
        st.stats.admissions_per_round.resize(depth + 1, 0);
      ++st.stats.admissions_per_round[depth];
      if (trace && (st.admitted.size() & 0x1FFu) == 0) {
        using namespace std::chrono;
        std::fprintf(
            stderr,
            "[sat] admitted %zu, frontier %zu, queue %zu, depth %zu, %.1f ms\n",
            st.admitted.size(), front.size(), heap.size(), depth,
            duration<double, std::milli>(steady_clock::now() - t0).count());
      }
      expand_from(*idx);
    }
  }

  // ------------------------------------------------------- literal matching

  std::size_t expand_literal(std::size_t round, const std::vector<std::size_t>& snap,
                             std::uint64_t norm_bound) {
    std::vector<Candidate> batch;
    std::unordered_set<Sequent, SequentHash> seen;
    std::uint64_t bound = std::min<std::uint64_t>(norm_bound, cfg.literal_bound);
    std::vector<Formula> ant;
    std::function<void()> visit = [&] {
      for (std::size_t so = 0; so <= ord.phi.size(); ++so) {
        tick();
        Sequent s;
        s.antecedent = ant;
        if (so > 0) s.succedent = ord.phi[so - 1];
        if (snap_covers(snap, s)) continue;
        if (seen.count(s)) continue;
        std::optional<Provenance> found;
        for (const RuleSchema& r : calc.rules) {
          if (r.is_axiom()) continue;
          Substitution sub;
          match_pattern(r.conclusion, s, sub, [&](Substitution& su) {
            MetaVars all = rule_metavars(r);
            std::vector<FillSlot> slots;
            for (const std::string& n : all.fm)
              if (!su.fm.count(n)) slots.push_back({FillSlot::Kind::Fm, n});
            for (const std::string& n : all.prop)
              if (!su.prop.count(n)) slots.push_back({FillSlot::Kind::Prop, n});
            Substitution filled = su;
            bool done = false;
            enumerate_fills(slots, 0, ord.phi, phi_vars, filled, [&] {
              if (done) return;
              tick();
              Provenance pv{Provenance::Kind::Step, r.name, std::nullopt, {}};
              for (const SequentPattern& P : r.premises) {
                Sequent inst = instantiate(P, filled);
                std::optional<std::size_t> cover;
                for (std::size_t fi : snap)
                  if (seq_embed(st.admitted[fi], inst)) {
                    cover = fi;
                    break;
                  }
                if (!cover) return;
                pv.premises.emplace_back(*cover, std::move(inst));
              }
              found = std::move(pv);
              done = true;
            });
            return done;
          });
          if (found) break;
        }
        if (found) {
          seen.insert(s);
          Candidate cd;
          cd.sequent = std::move(s);
          cd.prov = std::move(*found);
          batch.push_back(std::move(cd));
        }
      }
      if (ant.size() >= bound) return;
      for (const Formula& f : ord.phi) {
        ant.push_back(f);
        visit();
        ant.pop_back();
      }
    };
    visit();
    return admit_batch(batch, round);
  }

  SaturationState run() {
    t0 = std::chrono::steady_clock::now();
    if (cfg.engine == SaturationConfig::Engine::Anchored) {
      given_clause();
    } else {
      std::size_t n0 = build_initial();
      st.stats.admissions_per_round.push_back(n0);
      while (true) {
        current_round = st.stats.admissions_per_round.size();
        std::vector<std::size_t> snap = front.elements();
        std::size_t maxn = 0;
        for (std::size_t i : snap) maxn = std::max(maxn, norm(st.admitted[i]));
        std::uint64_t r_size = calc.size_tokens();
        std::uint64_t bound = saturating_mul(saturating_mul(r_size, maxn), r_size);
        std::size_t got = expand_literal(current_round, snap, bound);
        if (std::getenv("FLW_SAT_TRACE")) {
          using namespace std::chrono;
          std::fprintf(stderr,
                       "[sat] round %zu: frontier %zu, maxnorm %zu, bound %llu, "
                       "admitted %zu, %.1f ms\n",
                       current_round, snap.size(), maxn,
                       static_cast<unsigned long long>(bound), got,
                       duration<double, std::milli>(steady_clock::now() - t0).count());
        }
        if (got == 0) break;
        st.stats.admissions_per_round.push_back(got);
      }
    }
    st.stats.iterations = st.stats.admissions_per_round.size() - 1;
    st.frontier = front.elements();
    std::sort(st.frontier.begin(), st.frontier.end());
    st.stats.frontier_size = st.frontier.size();
    using namespace std::chrono;
    st.stats.wall_ms = duration<double, std::milli>(steady_clock::now() - t0).count();
    return std::move(st);
  }
};

} // namespace

// ------------------------------------------------------------- state queries

bool SaturationState::subsumes(const Sequent& goal) const {
  return witness(goal).has_value();
}

std::optional<std::size_t> SaturationState::witness(const Sequent& goal) const {
  std::optional<std::size_t> best;
  for (std::size_t idx : frontier) {
    if (!seq_embed(admitted[idx], goal)) continue;
    if (!best || norm(admitted[idx]) < norm(admitted[*best]) ||
        (norm(admitted[idx]) == norm(admitted[*best]) &&
         Sequent::canonical_less(admitted[idx], admitted[*best])))
      best = idx;
  }
  return best;
}

std::vector<Sequent> SaturationState::frontier_sequents() const {
  std::vector<Sequent> out;
  for (std::size_t idx : frontier) out.push_back(admitted[idx]);
  std::sort(out.begin(), out.end(), Sequent::canonical_less);
  return out;
}

std::vector<Sequent> SaturationState::frontier_after_round(std::size_t round) const {
  SequentAntichain ac;
  for (std::size_t i = 0; i < admitted.size(); ++i)
    if (admitted_round[i] <= round) ac.insert(admitted[i]);
  std::vector<Sequent> out = ac.elements();
  std::sort(out.begin(), out.end(), Sequent::canonical_less);
  return out;
}

// -------------------------------------------------------------- entry points

std::vector<Sequent> initial_batch(const Calculus& c, const Theory& t,
                                   std::span<const Formula> alphabet) {
  Engine e(c, t, alphabet, SaturationConfig{});
  e.t0 = std::chrono::steady_clock::now();
  e.build_initial();
  std::vector<Sequent> out;
  for (std::size_t idx : e.front.elements()) out.push_back(e.st.admitted[idx]);
  std::sort(out.begin(), out.end(), Sequent::canonical_less);
  return out;
}

SaturationState saturate(const Calculus& c, const Theory& t,
                         std::span<const Formula> alphabet,
                         const SaturationConfig& cfg) {
  Engine e(c, t, alphabet, cfg);
  return e.run();
}

Verdict check_goals(const SaturationState& st, std::span<const Sequent> goals) {
  Verdict v;
  for (std::size_t gi = 0; gi < goals.size(); ++gi) {
    if (auto w = st.witness(goals[gi])) {
      v.yes = true;
      v.witness_index = w;
      v.goal_index = gi;
      return v;
    }
  }
  return v;
}

Verdict decide(const Calculus& c, const Theory& t, std::span<const Formula> alphabet,
               std::span<const Sequent> goals, const SaturationConfig& cfg,
               SaturationState* out_state) {
  SequentOrder ord(std::vector<Formula>(alphabet.begin(), alphabet.end()));
  for (const Sequent& g : goals)
    if (!ord.is_phi_sequent(g))
      throw InvalidInput("alphabet must cover the goal: " + g.to_string());
  SaturationState st = saturate(c, t, alphabet, cfg);
  Verdict v = check_goals(st, goals);
  if (out_state) *out_state = std::move(st);
  return v;
}

Verdict decide_via_formulas(const Calculus& c, const Theory& t,
                            std::span<const Sequent> goals,
                            const SaturationConfig& cfg, SaturationState* out_state) {
  Theory tt = translate_theory(t, c.frag);
  std::vector<Sequent> gg;
  for (const Sequent& g : goals) {
    Sequent s;
    s.succedent = translate_sequent(g, c.frag);
    gg.push_back(std::move(s));
  }
  std::vector<Sequent> all = tt;
  all.insert(all.end(), gg.begin(), gg.end());
  std::vector<Formula> phi = subformula_closure(all);
  return decide(c, tt, phi, gg, cfg, out_state);
}

// ------------------------------------------------------------ reconstruction

namespace {

Derivation lift_by_weakening(Derivation d, const Sequent& target) {
  const Sequent s = d.sequent;
  if (s == target) return d;
  if (!(s.succedent == target.succedent))
    throw InternalInvariantViolated("weakening lift across different succedents");
  std::vector<bool> matched(target.antecedent.size(), false);
  std::size_t i = 0;
  for (std::size_t j = 0; j < target.antecedent.size() && i < s.antecedent.size(); ++j)
    if (s.antecedent[i] == target.antecedent[j]) {
      matched[j] = true;
      ++i;
    }
  if (i != s.antecedent.size())
    throw InternalInvariantViolated("weakening lift without an embedding");
  std::vector<Formula> cur = s.antecedent;
  std::size_t local = 0;
  for (std::size_t j = 0; j < target.antecedent.size(); ++j) {
    if (matched[j]) {
      ++local;
      continue;
    }
    cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(local), target.antecedent[j]);
    Sequent ns;
    ns.antecedent = cur;
    ns.succedent = target.succedent;
    std::vector<Derivation> ch;
    ch.push_back(std::move(d));
    d = Derivation::rule_node("wl", std::move(ns), std::move(ch));
    ++local;
  }
  return d;
}

} // namespace

Derivation reconstruct_deduction(const SaturationState& st, const Sequent& goal,
                                 bool standardize) {
  if (st.provenance.size() != st.admitted.size())
    throw InvalidInput("reconstruction needs a run with provenance recording");
  std::optional<std::size_t> w = st.witness(goal);
  if (!w) throw InvalidInput("goal is not subsumed by the saturated frontier");
  std::unordered_map<std::size_t, Derivation> memo;
  std::function<Derivation(std::size_t)> build = [&](std::size_t idx) -> Derivation {
    auto it = memo.find(idx);
    if (it != memo.end()) return it->second;
    const Provenance& pv = st.provenance[idx];
    Derivation d;
    switch (pv.kind) {
    case Provenance::Kind::Theory: d = Derivation::theory_leaf(st.admitted[idx]); break;
    case Provenance::Kind::Axiom:
      d = Derivation::rule_node(pv.rule, st.admitted[idx], {});
      break;
    case Provenance::Kind::Step: {
      std::vector<Derivation> ch;
      for (const auto& [ref, prem] : pv.premises)
        ch.push_back(lift_by_weakening(build(ref), prem));
      d = Derivation::rule_node(pv.rule, st.admitted[idx], std::move(ch));
      break;
    }
    }
    memo.emplace(idx, d);
    return d;
  };
  Derivation d = lift_by_weakening(build(*w), goal);
  if (standardize) {
    if (st.calculus.has_user_rules)
      throw InvalidInput("standardization needs a builtin-only calculus");
    d = normalize_to_standard(st.calculus, st.theory, d);
  }
  return d;
}

// ------------------------------------------------------------------- oracle

std::vector<Sequent> bounded_closure_oracle(const Calculus& c, const Theory& t,
                                            std::span<const Formula> alphabet,
                                            std::size_t cap, std::uint64_t budget) {
  SequentOrder ord(std::vector<Formula>(alphabet.begin(), alphabet.end()));
  for (const Sequent& s : t) {
    if (!ord.is_phi_sequent(s))
      throw InvalidInput("alphabet must contain every theory formula: " + s.to_string());
    if (norm(s) > cap)
      throw InvalidInput("closure cap is below a theory sequent: " + s.to_string());
  }
  for (const RuleSchema& r : c.rules) {
    MetaVars concl;
    scan_pattern(r.conclusion, concl);
    MetaVars all = rule_metavars(r);
    if (r.is_axiom()) {
      if (!all.seq.empty())
        throw InvalidInput("oracle: axiom '" + r.name + "' has sequence metavariables");
      continue;
    }
    for (const std::string& g : all.seq)
      if (std::find(concl.seq.begin(), concl.seq.end(), g) == concl.seq.end())
        throw InvalidInput("oracle: rule '" + r.name +
                           "' has a premise-only sequence metavariable");
    for (const std::string& x : all.succ)
      if (std::find(concl.succ.begin(), concl.succ.end(), x) == concl.succ.end())
        throw InvalidInput("oracle: rule '" + r.name +
                           "' has a premise-only succedent metavariable");
  }
  std::vector<Formula> vars;
  for (const Formula& f : ord.phi)
    if (f.is_var()) vars.push_back(f);

  std::vector<Sequent> uni;
  std::unordered_map<Sequent, std::size_t, SequentHash> index;
  {
    std::vector<Formula> ant;
    std::function<void()> gen = [&] {
      for (std::size_t so = 0; so <= ord.phi.size(); ++so) {
        Sequent s;
        s.antecedent = ant;
        if (so > 0) s.succedent = ord.phi[so - 1];
        index.emplace(s, uni.size());
        uni.push_back(std::move(s));
      }
      if (ant.size() >= cap) return;
      for (const Formula& f : ord.phi) {
        ant.push_back(f);
        gen();
        ant.pop_back();
      }
    };
    gen();
  }

  std::vector<char> member(uni.size(), 0);
  for (const Sequent& s : t) member[index.at(s)] = 1;
  std::uint64_t work = 0;
  auto charge = [&](std::uint64_t n) {
    work += n;
    if (work > budget)
      throw BudgetExceeded("closure oracle budget exceeded", 0, 0);
  };
  for (const RuleSchema& r : c.rules) {
    if (!r.is_axiom()) continue;
    MetaVars mv;
    scan_pattern(r.conclusion, mv);
    Substitution sub;
    std::vector<FillSlot> slots;
    for (const std::string& n : mv.fm) slots.push_back({FillSlot::Kind::Fm, n});
    for (const std::string& n : mv.prop) slots.push_back({FillSlot::Kind::Prop, n});
    for (const std::string& n : mv.succ) slots.push_back({FillSlot::Kind::Succ, n});
    enumerate_fills(slots, 0, ord.phi, vars, sub, [&] {
      charge(1);
      Sequent inst = instantiate(r.conclusion, sub);
      auto it = index.find(inst);
      if (it != index.end()) member[it->second] = 1;
    });
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t si = 0; si < uni.size(); ++si) {
      if (member[si]) continue;
      bool derived = false;
      for (const RuleSchema& r : c.rules) {
        if (r.is_axiom()) continue;
        Substitution sub;
        match_pattern(r.conclusion, uni[si], sub, [&](Substitution& su) {
          charge(1);
          MetaVars all = rule_metavars(r);
          std::vector<FillSlot> slots;
          for (const std::string& n : all.fm)
            if (!su.fm.count(n)) slots.push_back({FillSlot::Kind::Fm, n});
          for (const std::string& n : all.prop)
            if (!su.prop.count(n)) slots.push_back({FillSlot::Kind::Prop, n});
          Substitution filled = su;
          enumerate_fills(slots, 0, ord.phi, vars, filled, [&] {
            if (derived) return;
            charge(1);
            bool all_in = true;
            for (const SequentPattern& P : r.premises) {
              Sequent inst = instantiate(P, filled);
              auto it = index.find(inst);
              if (it == index.end() || !member[it->second]) {
                all_in = false;
                break;
              }
            }
            if (all_in) derived = true;
          });
          return derived;
        });
        if (derived) break;
      }
      if (derived) {
        member[si] = 1;
        changed = true;
      }
    }
  }

  std::vector<Sequent> out;
  for (std::size_t si = 0; si < uni.size(); ++si)
    if (member[si]) out.push_back(uni[si]);
  std::sort(out.begin(), out.end(), Sequent::canonical_less);
  return out;
}

// ------------------------------------------------------------- bounds report

BoundsReport bounds_report(const SaturationState& st, std::span<const Sequent> goals,
                           bool strict) {
  BoundsReport rep;
  std::uint64_t r_size = st.calculus.size_tokens();
  std::uint64_t t_sum = size_sum(st.theory);

  for (const Sequent& g : goals) {
    ++rep.goals_checked;
    std::vector<Sequent> pool = st.theory;
    pool.push_back(g);
    std::size_t closure = subformula_closure(pool).size();
    std::uint64_t limit = g.size_tokens() + t_sum;
    if (closure > limit)
      rep.violations.push_back("alphabet bound: goal " + g.to_string() + " closure " +
                               std::to_string(closure) + " exceeds " +
                               std::to_string(limit));
  }

  for (std::size_t i = 0; i < st.admitted.size(); ++i) {
    ++rep.admissions_checked;
    std::uint64_t bound =
        saturating_mul(t_sum + 1, sat_pow(r_size, 2 * st.admitted_round[i] + 1));
    if (norm(st.admitted[i]) >= bound)
      rep.violations.push_back("admission bound: " + st.admitted[i].to_string() +
                               " at round " + std::to_string(st.admitted_round[i]) +
                               " has norm " + std::to_string(norm(st.admitted[i])) +
                               ", limit " + std::to_string(bound));
  }

  std::size_t rounds = st.stats.admissions_per_round.size();
  ControlledTrace tr;
  tr.n = saturating_mul(t_sum + 1, r_size);
  tr.g = [r_size](std::uint64_t x) {
    return saturating_mul(saturating_mul(r_size, r_size), x);
  };
  for (std::size_t round = 0; round < rounds; ++round) {
    std::optional<std::size_t> least;
    for (std::size_t i = 0; i < st.admitted.size(); ++i) {
      if (st.admitted_round[i] != round) continue;
      if (!least || Sequent::canonical_less(st.admitted[i], st.admitted[*least]))
        least = i;
    }
    if (least) tr.norms.push_back(norm(st.admitted[*least]));
  }
  rep.trace_length = tr.norms.size();
  if (!control_check(tr))
    rep.violations.push_back("controlled trace: per-round least admissions break the "
                             "norm control");

  if (strict && !rep.violations.empty())
    throw InternalInvariantViolated("bounds report violation: " + rep.violations.front());
  return rep;
}

} // namespace flw
