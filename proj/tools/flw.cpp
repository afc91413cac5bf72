// Command-line front end: deducibility runs over regular theories, deduction
// checking and cut normalization, channel-system reachability, the
// channel-system-to-sequent encoding pipeline, and a four-way cross-check
// harness over corpora or seeded random instances.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flw/derivation.hpp"
#include "flw/encode.hpp"
#include "flw/errors.hpp"
#include "flw/lcs.hpp"
#include "flw/saturate.hpp"
#include "xcheck_harness.hpp"

namespace {

using namespace flw;

struct Report {
  std::vector<std::pair<std::string, std::string>> kv;

  void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
  void add(const std::string& k, const char* v) { kv.emplace_back(k, v); }
  void add(const std::string& k, bool v) { kv.emplace_back(k, v ? "true" : "false"); }
  template <class T>
    requires(std::integral<T> && !std::same_as<T, bool>)
  void add(const std::string& k, T v) {
    kv.emplace_back(k, std::to_string(v));
  }
  void add(const std::string& k, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    kv.emplace_back(k, buf);
  }

  void print(bool json) const {
    if (json) {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : kv) j[k] = v;
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [k, v] : kv) std::cout << k << ": " << v << "\n";
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << text;
  if (!out) throw InvalidInput("write failed: " + path);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Options {
  bool json = false;
  std::string config_path;   // empty = defaults only
  std::uint64_t seed = 42;
  double time_budget = -1.0; // seconds; <0 = leave the config value alone
  std::size_t cap = 4;
  std::string fragment = "full";
};

std::uint64_t parse_u64(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("config: bad value for " + key + ": " + val);
  }
}

double parse_double(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    double v = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("config: bad value for " + key + ": " + val);
  }
}

bool parse_bool(const std::string& key, const std::string& val) {
  if (val == "true" || val == "1" || val == "yes") return true;
  if (val == "false" || val == "0" || val == "no") return false;
  throw InvalidInput("config: bad value for " + key + ": " + val);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

SaturationConfig load_saturation_config(const Options& opt) {
  SaturationConfig cfg;
  if (!opt.config_path.empty()) {
    std::istringstream is(read_file(opt.config_path));
    std::string line;
    while (std::getline(is, line)) {
      if (std::size_t h = line.find('#'); h != std::string::npos) line.resize(h);
      line = trim(line);
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw InvalidInput("config: expected key=value, got: " + line);
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (key == "engine") {
        if (val == "anchored")
          cfg.engine = SaturationConfig::Engine::Anchored;
        else if (val == "literal")
          cfg.engine = SaturationConfig::Engine::Literal;
        else
          throw InvalidInput("config: engine must be anchored or literal, got: " + val);
      } else if (key == "literal_bound") {
        cfg.literal_bound = static_cast<std::size_t>(parse_u64(key, val));
      } else if (key == "time_budget_s") {
        cfg.time_budget_s = parse_double(key, val);
      } else if (key == "frontier_budget") {
        cfg.frontier_budget = parse_u64(key, val);
      } else if (key == "record_provenance") {
        cfg.record_provenance = parse_bool(key, val);
      } else {
        throw InvalidInput("config: unknown key: " + key);
      }
    }
  }
  if (opt.time_budget >= 0) cfg.time_budget_s = opt.time_budget;
  return cfg;
}

const char* engine_name(SaturationConfig::Engine e) {
  return e == SaturationConfig::Engine::Anchored ? "anchored" : "literal";
}

void require_in_fragment(const Formula& f, Fragment frag) {
  if (f.kind() == Formula::Kind::Var) return;
  frag.require(f.conn(), "input formula");
  if (f.kind() == Formula::Kind::Bin) {
    require_in_fragment(f.left(), frag);
    require_in_fragment(f.right(), frag);
  }
}

void require_theory_in_fragment(const Theory& t, Fragment frag) {
  for (const Sequent& s : t) {
    for (const Formula& f : s.antecedent) require_in_fragment(f, frag);
    if (s.succedent) require_in_fragment(*s.succedent, frag);
  }
}

std::string join_counts(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

int cmd_decide(const Options& opt, const std::string& theory_path,
               const std::string& goal_path, const std::string& proof_path) {
  std::string ttext = read_file(theory_path);
  std::string gtext = read_file(goal_path);
  Theory theory = parse_theory(ttext);
  Theory goals = parse_theory(gtext);
  if (goals.empty()) throw InvalidInput("goal file has no sequents: " + goal_path);
  Fragment frag = parse_fragment(opt.fragment);
  require_theory_in_fragment(theory, frag);
  require_theory_in_fragment(goals, frag);
  Calculus calc = builtin_calculus(frag);
  Theory pool = theory;
  pool.insert(pool.end(), goals.begin(), goals.end());
  std::vector<Formula> phi = subformula_closure(pool);
  SaturationConfig cfg = load_saturation_config(opt);

  Report rep;
  rep.add("command", "decide");
  rep.add("theory_path", theory_path);
  rep.add("theory_hash", fnv1a_hex(ttext));
  rep.add("goal_path", goal_path);
  rep.add("goal_hash", fnv1a_hex(gtext));
  rep.add("fragment", frag.to_string());
  rep.add("engine", engine_name(cfg.engine));
  rep.add("alphabet_size", phi.size());
  rep.add("goal_count", goals.size());

  SaturationState st;
  Verdict v = decide(calc, theory, phi, goals, cfg, &st);
  BoundsReport br = bounds_report(st, goals, /*strict=*/false);

  rep.add("verdict", v.yes ? "yes" : "no");
  if (v.yes) {
    rep.add("goal_index", *v.goal_index);
    rep.add("witness", st.admitted[*v.witness_index].to_string());
  }
  rep.add("iterations", st.stats.iterations);
  rep.add("frontier_size", st.stats.frontier_size);
  rep.add("max_norm", st.stats.max_norm);
  rep.add("admissions_per_round", join_counts(st.stats.admissions_per_round));
  rep.add("evictions", st.stats.evictions);
  rep.add("bounds_ok", br.ok());
  if (v.yes && !proof_path.empty()) {
    Derivation d = reconstruct_deduction(st, goals[*v.goal_index]);
    write_file(proof_path, print_derivation(d));
    rep.add("proof_path", proof_path);
  }
  rep.add("wall_ms", st.stats.wall_ms);
  rep.print(opt.json);
  return v.yes ? 0 : 1;
}

int cmd_check(const Options& opt, const std::string& deriv_path,
              const std::string& theory_path, bool require_standard) {
  std::string dtext = read_file(deriv_path);
  Derivation d = parse_derivation(dtext);
  Theory theory;
  std::string thash = "-";
  if (!theory_path.empty()) {
    std::string ttext = read_file(theory_path);
    theory = parse_theory(ttext);
    thash = fnv1a_hex(ttext);
  }
  Fragment frag = parse_fragment(opt.fragment);
  Calculus calc = builtin_calculus(frag);
  CheckReport cr = check_deduction(calc, theory, d);
  bool pass = cr.valid && (!require_standard || cr.standard);

  Report rep;
  rep.add("command", "check");
  rep.add("derivation_path", deriv_path);
  rep.add("derivation_hash", fnv1a_hex(dtext));
  rep.add("theory_path", theory_path.empty() ? "-" : theory_path);
  rep.add("theory_hash", thash);
  rep.add("fragment", frag.to_string());
  rep.add("endsequent", d.sequent.to_string());
  rep.add("nodes", d.node_count());
  rep.add("valid", cr.valid);
  rep.add("standard", cr.standard);
  rep.add("analytic", cr.analytic);
  rep.add("violation_count", cr.violations.size());
  for (std::size_t i = 0; i < cr.violations.size(); ++i)
    rep.add("violation_" + std::to_string(i + 1),
            cr.violations[i].first + ": " + cr.violations[i].second);
  rep.add("verdict", pass ? "yes" : "no");
  rep.print(opt.json);
  return pass ? 0 : 1;
}

int cmd_normalize(const Options& opt, const std::string& deriv_path,
                  const std::string& theory_path, const std::string& out_path) {
  std::string dtext = read_file(deriv_path);
  Derivation d = parse_derivation(dtext);
  Theory theory;
  std::string thash = "-";
  if (!theory_path.empty()) {
    std::string ttext = read_file(theory_path);
    theory = parse_theory(ttext);
    thash = fnv1a_hex(ttext);
  }
  Fragment frag = parse_fragment(opt.fragment);
  Calculus calc = builtin_calculus(frag);
  CheckReport before = check_deduction(calc, theory, d);
  Derivation nd = normalize_to_standard(calc, theory, d);
  CheckReport after = check_deduction(calc, theory, nd);
  bool preserved = d.sequent == nd.sequent;
  bool ok = after.valid && after.standard && preserved;
  write_file(out_path, print_derivation(nd));

  Report rep;
  rep.add("command", "normalize");
  rep.add("derivation_path", deriv_path);
  rep.add("derivation_hash", fnv1a_hex(dtext));
  rep.add("theory_path", theory_path.empty() ? "-" : theory_path);
  rep.add("theory_hash", thash);
  rep.add("fragment", frag.to_string());
  rep.add("endsequent", d.sequent.to_string());
  rep.add("standard_before", before.standard);
  rep.add("nodes_before", d.node_count());
  rep.add("standard_after", after.standard);
  rep.add("valid_after", after.valid);
  rep.add("analytic_after", after.analytic);
  rep.add("endsequent_preserved", preserved);
  rep.add("nodes_after", nd.node_count());
  rep.add("out", out_path);
  rep.add("verdict", ok ? "yes" : "error");
  rep.print(opt.json);
  return ok ? 0 : 2;
}

int cmd_lcs_reach(const Options& opt, const std::string& lcs_path,
                  const std::string& from_s, const std::string& to_s,
                  const std::string& mode) {
  std::string text = read_file(lcs_path);
  ChannelSystem cs = parse_lcs(text);
  Configuration u = parse_config(cs, from_s);
  Configuration v = parse_config(cs, to_s);

  Report rep;
  rep.add("command", "lcs-reach");
  rep.add("lcs_path", lcs_path);
  rep.add("lcs_hash", fnv1a_hex(text));
  rep.add("from", print_config(cs, u));
  rep.add("to", print_config(cs, v));
  rep.add("mode", mode);
  int code;
  if (mode == "exact") {
    bool yes = reach_exact(cs, u, v);
    rep.add("verdict", yes ? "yes" : "no");
    code = yes ? 0 : 1;
  } else {
    rep.add("cap", opt.cap);
    BoundedReach br = reach_bounded(cs, u, v, opt.cap);
    bool yes = br == BoundedReach::Yes;
    rep.add("verdict", yes ? "yes" : "no_within_cap");
    code = yes ? 0 : 1;
  }
  rep.print(opt.json);
  return code;
}

int cmd_encode(const Options& opt, const std::string& lcs_path, const std::string& from_s,
               const std::string& to_s, const std::string& theory_out,
               const std::string& goals_out) {
  std::string text = read_file(lcs_path);
  ChannelSystem cs = parse_lcs(text);
  Configuration u = parse_config(cs, from_s);
  Configuration v = parse_config(cs, to_s);
  EncodedInstance inst = reduce(cs, u, v);
  std::string ttext = print_theory(inst.theory);
  std::string gtext = print_theory(inst.commuted_goals);
  write_file(theory_out, ttext);
  write_file(goals_out, gtext);
  bool roundtrip = parse_theory(ttext) == inst.theory &&
                   parse_theory(gtext) == inst.commuted_goals;

  Report rep;
  rep.add("command", "encode");
  rep.add("lcs_path", lcs_path);
  rep.add("lcs_hash", fnv1a_hex(text));
  rep.add("from", print_config(cs, u));
  rep.add("to", print_config(cs, v));
  rep.add("theory_out", theory_out);
  rep.add("goals_out", goals_out);
  rep.add("theory_count", inst.theory.size());
  rep.add("goal_count", inst.commuted_goals.size());
  rep.add("canonical", inst.canonical_goal.to_string());
  rep.add("roundtrip_ok", roundtrip);
  rep.add("verdict", roundtrip ? "yes" : "error");
  rep.print(opt.json);
  return roundtrip ? 0 : 2;
}

struct XcheckInstance {
  std::string id;
  ChannelSystem cs;
  Configuration u, v;
};

XcheckInstance load_corpus_instance(const std::filesystem::path& path) {
  XcheckInstance inst;
  inst.id = path.stem().string();
  std::istringstream is(read_file(path.string()));
  std::string line, sys, from_s, to_s;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.rfind("from:", 0) == 0)
      from_s = t.substr(5);
    else if (t.rfind("to:", 0) == 0)
      to_s = t.substr(3);
    else
      sys += line + "\n";
  }
  if (from_s.empty() || to_s.empty())
    throw InvalidInput(inst.id + ": instance file needs from: and to: lines");
  inst.cs = parse_lcs(sys);
  inst.u = parse_config(inst.cs, from_s);
  inst.v = parse_config(inst.cs, to_s);
  return inst;
}

int cmd_xcheck(const Options& opt, const std::string& corpus_dir, bool random_mode,
               std::size_t count, const harness::LcsCaps& caps) {
  if (random_mode == !corpus_dir.empty())
    throw InvalidInput("xcheck needs either a corpus directory or --random");
  SaturationConfig cfg = load_saturation_config(opt);

  Report rep;
  rep.add("command", "xcheck");
  rep.add("mode", random_mode ? "random" : "corpus");
  if (random_mode) {
    rep.add("seed", opt.seed);
    rep.add("count", count);
  } else {
    rep.add("corpus", corpus_dir);
  }
  rep.add("cap", opt.cap);
  rep.add("engine", engine_name(cfg.engine));

  std::size_t disagreements = 0, budget_hits = 0, decided = 0, compiled = 0;
  std::size_t checked = 0;
  auto run_one = [&](const XcheckInstance& inst, bool force_decide) -> bool {
    harness::FourwayOutcome out =
        harness::fourway_check(inst.cs, inst.u, inst.v, opt.cap, cfg, force_decide);
    if (out.budget_exceeded) {
      rep.add(inst.id, "budget_exceeded");
      ++budget_hits;
      return false;
    }
    ++checked;
    if (out.decided) ++decided;
    std::string line;
    line += "bounded=";
    line += out.bounded == BoundedReach::Yes ? "yes" : "no_within_cap";
    line += " exact=";
    line += out.exact ? "yes" : "no";
    line += " decide=";
    line += out.decided ? (*out.decided ? "yes" : "no") : "-";
    line += " compile=";
    if (!out.exact)
      line += "-";
    else if (!out.trace_found)
      line += "none";
    else {
      line += out.compiled_ok ? "ok" : "bad";
      if (out.compiled_ok) ++compiled;
    }
    line += out.problems.empty() ? " agree=true" : " agree=false";
    rep.add(inst.id, line);
    for (std::size_t i = 0; i < out.problems.size(); ++i)
      rep.add(inst.id + "_problem_" + std::to_string(i + 1), out.problems[i]);
    if (!out.problems.empty()) ++disagreements;
    return true;
  };

  if (random_mode) {
    std::mt19937_64 rng(opt.seed);
    std::size_t made = 0, attempts = 0;
    while (made < count) {
      if (++attempts > count * 50 + 100)
        throw BudgetExceeded("xcheck: too many instances exceeded the budget", attempts,
                             made);
      XcheckInstance inst;
      inst.cs = harness::random_lcs(rng, caps);
      inst.u = harness::random_conf(rng, inst.cs, caps.max_word);
      inst.v = harness::random_conf(rng, inst.cs, caps.max_word);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "r%04zu", attempts);
      inst.id = buf;
      if (run_one(inst, /*force_decide=*/false)) ++made;
    }
  } else {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir))
      if (e.path().extension() == ".lcs") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidInput("no .lcs files in " + corpus_dir);
    for (const auto& f : files) run_one(load_corpus_instance(f), /*force_decide=*/true);
  }

  rep.add("instances", checked);
  rep.add("decide_runs", decided);
  rep.add("compiled_proofs", compiled);
  rep.add("disagreements", disagreements);
  rep.add("budget_exceeded", budget_hits);
  bool agree = disagreements == 0;
  rep.add("verdict", !agree ? "no" : (budget_hits ? "budget_exceeded" : "yes"));
  rep.print(opt.json);
  if (!agree) return 1;
  if (budget_hits) return 3;
  return 0;
}

void error_report(const Options& opt, const std::string& cmd, const char* verdict,
                  const std::string& message) {
  Report rep;
  rep.add("command", cmd.empty() ? "-" : cmd);
  rep.add("verdict", verdict);
  rep.add("error", message);
  rep.print(opt.json);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision laboratory for a Lambek-style sequent calculus with weakening, "
               "with a lossy-channel-system reachability workbench and the reduction "
               "between the two"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_flag("--json", opt.json, "emit the report as a JSON object");
  app.add_option("--config", opt.config_path, "key=value saturation configuration file")
      ->envname("FLW_CONFIG");
  app.add_option("--seed", opt.seed, "seed for randomized commands");
  app.add_option("--time-budget", opt.time_budget, "saturation time budget in seconds");
  app.add_option("--cap", opt.cap, "channel-word length cap for bounded search");
  app.add_option("--fragment", opt.fragment,
                 "connective fragment, e.g. full, fus, or fus,and");

  auto* c_decide = app.add_subcommand(
      "decide", "saturate a regular theory and test whether any goal sequent follows");
  std::string d_theory, d_goals, d_proof;
  c_decide->add_option("theory", d_theory, "theory file, one sequent per line")
      ->required();
  c_decide->add_option("goals", d_goals, "goal file, one sequent per line")->required();
  c_decide->add_option("--emit-proof", d_proof,
                       "write a checkable deduction of the first satisfied goal here");

  auto* c_check = app.add_subcommand("check", "check a deduction file against a theory");
  std::string k_deriv, k_theory;
  bool k_standard = false;
  c_check->add_option("derivation", k_deriv, "deduction file")->required();
  c_check->add_option("theory", k_theory, "theory file (optional)");
  c_check->add_flag("--require-standard", k_standard,
                    "fail unless every cut sits on a theory leaf");

  auto* c_norm = app.add_subcommand(
      "normalize", "rewrite a valid deduction so every cut sits on a theory leaf");
  std::string n_deriv, n_theory, n_out;
  c_norm->add_option("derivation", n_deriv, "deduction file")->required();
  c_norm->add_option("theory", n_theory, "theory file (optional)");
  c_norm->add_option("--out", n_out, "output deduction file")->required();

  auto* c_reach = app.add_subcommand("lcs-reach",
                                     "decide lossy reachability between configurations");
  std::string r_lcs, r_from, r_to, r_mode = "exact";
  c_reach->add_option("system", r_lcs, "channel system file")->required();
  c_reach->add_option("--from", r_from, "start configuration, e.g. \"q1 : a a ; b\"")
      ->required();
  c_reach->add_option("--to", r_to, "target configuration")->required();
  c_reach->add_option("--mode", r_mode, "exact or bounded")
      ->check(CLI::IsMember({"exact", "bounded"}));

  auto* c_enc = app.add_subcommand(
      "encode", "translate a reachability instance into a theory plus goal sequents");
  std::string e_lcs, e_from, e_to, e_tout, e_gout;
  c_enc->add_option("system", e_lcs, "channel system file")->required();
  c_enc->add_option("--from", e_from, "start configuration")->required();
  c_enc->add_option("--to", e_to, "target configuration")->required();
  c_enc->add_option("--theory-out", e_tout, "output theory file")->required();
  c_enc->add_option("--goals-out", e_gout, "output goal file")->required();

  auto* c_x = app.add_subcommand(
      "xcheck", "cross-validate bounded search, exact coverability, deducibility of "
                "the encoding, and compiled proofs on a corpus or random instances");
  std::string x_corpus;
  bool x_random = false;
  std::size_t x_count = 50;
  harness::LcsCaps x_caps;
  c_x->add_option("corpus", x_corpus,
                  "directory of .lcs instance files carrying from:/to: lines");
  c_x->add_flag("--random", x_random, "generate seeded random instances instead");
  c_x->add_option("--count", x_count, "number of random instances");
  c_x->add_option("--max-states", x_caps.max_states, "random cap: control states");
  c_x->add_option("--max-channels", x_caps.max_channels, "random cap: channels");
  c_x->add_option("--max-letters", x_caps.max_letters, "random cap: alphabet letters");
  c_x->add_option("--max-instrs", x_caps.max_instrs, "random cap: instructions");
  c_x->add_option("--max-word", x_caps.max_word, "random cap: initial word length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  std::string cmd =
      app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
  try {
    if (c_decide->parsed()) return cmd_decide(opt, d_theory, d_goals, d_proof);
    if (c_check->parsed()) return cmd_check(opt, k_deriv, k_theory, k_standard);
    if (c_norm->parsed()) return cmd_normalize(opt, n_deriv, n_theory, n_out);
    if (c_reach->parsed()) return cmd_lcs_reach(opt, r_lcs, r_from, r_to, r_mode);
    if (c_enc->parsed()) return cmd_encode(opt, e_lcs, e_from, e_to, e_tout, e_gout);
    if (c_x->parsed()) return cmd_xcheck(opt, x_corpus, x_random, x_count, x_caps);
  } catch (const BudgetExceeded& e) {
    error_report(opt, cmd, "budget_exceeded", e.what());
    return 3;
  } catch (const InvalidInput& e) {
    error_report(opt, cmd, "error", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_report(opt, cmd, "error", e.what());
    return 2;
  }
  return 2;
}
