#include "flw/lcs.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "flw/order.hpp"

namespace flw {

namespace {
std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

std::size_t find_name(const std::vector<std::string>& names, const std::string& n,
                      const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return i;
  throw InvalidInput(std::string("unknown ") + what + " '" + n + "'");
}
} // namespace

std::size_t ChannelSystem::state_index(const std::string& n) const {
  return find_name(states, n, "state");
}
std::size_t ChannelSystem::channel_index(const std::string& n) const {
  return find_name(channels, n, "channel");
}
std::size_t ChannelSystem::letter_index(const std::string& n) const {
  return find_name(letters, n, "letter");
}

std::size_t Configuration::hash() const {
  std::size_t h = hash_mix(0xC0F1, state);
  for (const auto& w : words) {
    h = hash_mix(h, 0x5E9);
    for (std::size_t a : w) h = hash_mix(h, a + 1);
  }
  return h;
}

std::size_t Configuration::total_letters() const {
  std::size_t n = 0;
  for (const auto& w : words) n += w.size();
  return n;
}

std::size_t Configuration::max_word() const {
  std::size_t n = 0;
  for (const auto& w : words) n = std::max(n, w.size());
  return n;
}

bool config_embed(const Configuration& c1, const Configuration& c2) {
  if (c1.state != c2.state || c1.words.size() != c2.words.size()) return false;
  for (std::size_t i = 0; i < c1.words.size(); ++i)
    if (!subword_embed<std::size_t>(c1.words[i], c2.words[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing / printing

namespace {
std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

void check_fresh(std::vector<std::string>& seen, const std::string& n) {
  if (std::find(seen.begin(), seen.end(), n) != seen.end())
    throw ParseError("duplicate name '" + n + "' in channel system");
  seen.push_back(n);
}
} // namespace

ChannelSystem parse_lcs(const std::string& text) {
  ChannelSystem cs;
  std::vector<std::string> all_names;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hashp = line.find('#');
    if (hashp != std::string::npos) line = line.substr(0, hashp);
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    try {
      if (toks[0] == "states:" || toks[0] == "channels:" || toks[0] == "alphabet:") {
        auto& dst = toks[0] == "states:" ? cs.states
                    : toks[0] == "channels:" ? cs.channels
                                             : cs.letters;
        if (!dst.empty()) throw ParseError("duplicate '" + toks[0] + "' header");
        for (std::size_t i = 1; i < toks.size(); ++i) {
          check_fresh(all_names, toks[i]);
          dst.push_back(toks[i]);
        }
        if (dst.empty()) throw ParseError("'" + toks[0] + "' lists no names");
      } else {
        if (toks.size() != 5)
          throw ParseError("instruction needs 5 tokens: state channel letter ?|! state");
        ChannelSystem::Instr ins;
        ins.state = cs.state_index(toks[0]);
        ins.chan = cs.channel_index(toks[1]);
        ins.letter = cs.letter_index(toks[2]);
        if (toks[3] == "?")
          ins.is_write = false;
        else if (toks[3] == "!")
          ins.is_write = true;
        else
          throw ParseError("instruction direction must be '?' or '!', got '" + toks[3] + "'");
        ins.next = cs.state_index(toks[4]);
        cs.instrs.push_back(ins);
      }
    } catch (const InvalidInput& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cs.states.empty()) throw ParseError("channel system has no 'states:' line");
  if (cs.channels.empty()) throw ParseError("channel system has no 'channels:' line");
  if (cs.letters.empty()) throw ParseError("channel system has no 'alphabet:' line");
  return cs;
}

Configuration parse_config(const ChannelSystem& cs, const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("configuration is missing ':': " + text);
  std::vector<std::string> st = split_ws(text.substr(0, colon));
  if (st.size() != 1) throw ParseError("configuration needs one state before ':'");
  Configuration c;
  c.state = cs.state_index(st[0]);
  std::string rest = text.substr(colon + 1);
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    std::size_t semi = rest.find(';', start);
    segments.push_back(semi == std::string::npos ? rest.substr(start)
                                                 : rest.substr(start, semi - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (segments.size() != cs.channels.size())
    throw ParseError("configuration has " + std::to_string(segments.size()) +
                     " channel words, system has " + std::to_string(cs.channels.size()) +
                     " channels");
  for (const std::string& seg : segments) {
    std::vector<std::size_t> word;
    for (const std::string& tok : split_ws(seg)) word.push_back(cs.letter_index(tok));
    c.words.push_back(std::move(word));
  }
  return c;
}

std::string print_config(const ChannelSystem& cs, const Configuration& c) {
  std::string out = cs.states.at(c.state) + " :";
  for (std::size_t i = 0; i < c.words.size(); ++i) {
    if (i) out += " ;";
    for (std::size_t a : c.words[i]) out += " " + cs.letters.at(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step relations

std::vector<std::pair<Configuration, std::size_t>> step_perfect(const ChannelSystem& cs,
                                                                const Configuration& c) {
  std::vector<std::pair<Configuration, std::size_t>> out;
  for (std::size_t i = 0; i < cs.instrs.size(); ++i) {
    const auto& ins = cs.instrs[i];
    if (ins.state != c.state) continue;
    if (ins.is_write) {
      Configuration d = c;
      d.state = ins.next;
      d.words[ins.chan].push_back(ins.letter);
      out.emplace_back(std::move(d), i);
    } else {
      const auto& w = c.words[ins.chan];
      if (!w.empty() && w.front() == ins.letter) {
        Configuration d = c;
        d.state = ins.next;
        d.words[ins.chan].erase(d.words[ins.chan].begin());
        out.emplace_back(std::move(d), i);
      }
    }
  }
  return out;
}

std::vector<Configuration> step_lossy(const Configuration& c) {
  std::vector<Configuration> out;
  for (std::size_t ch = 0; ch < c.words.size(); ++ch) {
    for (std::size_t i = 0; i < c.words[ch].size(); ++i) {
      Configuration d = c;
      d.words[ch].erase(d.words[ch].begin() + static_cast<std::ptrdiff_t>(i));
      bool dup = false;
      for (const Configuration& prev : out)
        if (prev == d) { dup = true; break; }
      if (!dup) out.push_back(std::move(d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reachability

BoundedReach reach_bounded(const ChannelSystem& cs, const Configuration& u,
                           const Configuration& v, std::size_t cap,
                           std::uint64_t node_budget) {
  if (u.words.size() != cs.channels.size() || v.words.size() != cs.channels.size())
    throw InvalidInput("configuration channel count does not match the system");
  if (u.max_word() > cap) return BoundedReach::NoWithinCap;
  std::unordered_set<Configuration, ConfigurationHash> seen;
  std::deque<Configuration> queue;
  seen.insert(u);
  queue.push_back(u);
  while (!queue.empty()) {
    Configuration c = std::move(queue.front());
    queue.pop_front();
    if (config_embed(v, c)) return BoundedReach::Yes; // losses close downward
    auto push = [&](Configuration d) {
      if (d.max_word() > cap) return;
      if (seen.insert(d).second) {
        if (seen.size() > node_budget)
          throw BudgetExceeded("bounded reachability exceeded its node budget",
                               0, seen.size());
        queue.push_back(std::move(d));
      }
    };
    for (auto& [d, instr] : step_perfect(cs, c)) push(std::move(d));
    for (Configuration& d : step_lossy(c)) push(std::move(d));
  }
  return BoundedReach::NoWithinCap;
}

namespace {
struct ConfigLe {
  bool operator()(const Configuration& a, const Configuration& b) const {
    return config_embed(a, b);
  }
};
} // namespace

bool reach_exact(const ChannelSystem& cs, const Configuration& u, const Configuration& v,
                 std::uint64_t basis_budget) {
  if (u.words.size() != cs.channels.size() || v.words.size() != cs.channels.size())
    throw InvalidInput("configuration channel count does not match the system");
  // Antichain of minimal configurations from which v is coverable. Loss
  // transitions contribute only configurations above already-present ones, so
  // minimality absorbs them and only perfect-step predecessors are generated.
  Antichain<Configuration, ConfigLe> basis;
  basis.insert(v);
  std::deque<Configuration> work;
  work.push_back(v);
  std::uint64_t processed = 0;
  while (!work.empty()) {
    Configuration b = std::move(work.front());
    work.pop_front();
    if (++processed > basis_budget)
      throw BudgetExceeded("backward coverability exceeded its budget", processed,
                           basis.size());
    bool live = std::any_of(basis.elements().begin(), basis.elements().end(),
                            [&](const Configuration& e) { return e == b; });
    if (!live) continue; // evicted while queued; a smaller element covers it
    for (const auto& ins : cs.instrs) {
      if (ins.next != b.state) continue;
      Configuration p = b;
      p.state = ins.state;
      if (ins.is_write) {
        // The written letter either embedded the tail of the target word (drop
        // it) or was lost immediately (keep the word). Dropping yields the
        // smaller predecessor whenever it applies.
        auto& w = p.words[ins.chan];
        if (!w.empty() && w.back() == ins.letter) w.pop_back();
      } else {
        auto& w = p.words[ins.chan];
        w.insert(w.begin(), ins.letter);
      }
      auto outcome = basis.insert(p);
      if (outcome.inserted) work.push_back(std::move(p));
    }
  }
  for (const Configuration& b : basis.elements())
    if (config_embed(b, u)) return true;
  return false;
}

namespace {
using ConfigSet = std::unordered_set<Configuration, ConfigurationHash>;

ConfigSet interleaved_closure(const ChannelSystem& cs, const Configuration& u,
                              std::size_t cap, std::uint64_t budget) {
  ConfigSet seen;
  std::deque<Configuration> queue;
  if (u.max_word() <= cap) {
    seen.insert(u);
    queue.push_back(u);
  }
  while (!queue.empty()) {
    Configuration c = std::move(queue.front());
    queue.pop_front();
    auto push = [&](Configuration d) {
      if (d.max_word() > cap) return;
      if (seen.insert(d).second) {
        if (seen.size() > budget)
          throw BudgetExceeded("closure probe exceeded its budget", 0, seen.size());
        queue.push_back(std::move(d));
      }
    };
    for (auto& [d, instr] : step_perfect(cs, c)) push(std::move(d));
    for (Configuration& d : step_lossy(c)) push(std::move(d));
  }
  return seen;
}

void loss_close(ConfigSet& set, std::uint64_t budget) {
  std::deque<Configuration> queue(set.begin(), set.end());
  while (!queue.empty()) {
    Configuration c = std::move(queue.front());
    queue.pop_front();
    for (Configuration& d : step_lossy(c)) {
      if (set.insert(d).second) {
        if (set.size() > budget)
          throw BudgetExceeded("closure probe exceeded its budget", 0, set.size());
        queue.push_back(std::move(d));
      }
    }
  }
}
} // namespace

bool semantics_equivalence_probe(const ChannelSystem& cs, const Configuration& u,
                                 std::size_t cap, std::uint64_t node_budget) {
  ConfigSet a = interleaved_closure(cs, u, cap, node_budget);

  // Discipline: loss-closure first, then alternate perfect steps with
  // loss-closures until nothing new appears.
  ConfigSet b;
  if (u.max_word() <= cap) b.insert(u);
  loss_close(b, node_budget);
  while (true) {
    ConfigSet fresh;
    for (const Configuration& c : b)
      for (auto& [d, instr] : step_perfect(cs, c))
        if (d.max_word() <= cap && !b.count(d)) fresh.insert(std::move(d));
    if (fresh.empty()) break;
    for (const Configuration& d : fresh) b.insert(d);
    loss_close(b, node_budget);
    if (b.size() > node_budget)
      throw BudgetExceeded("closure probe exceeded its budget", 0, b.size());
  }
  return a == b;
}

} // namespace flw
