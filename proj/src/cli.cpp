#include "symcol/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symcol/json_io.hpp"
#include "symcol/protocol.hpp"
#include "symcol/theory.hpp"

namespace symcol {

namespace {

constexpr int kExitNo = 0;
constexpr int kExitYes = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

struct Options {
  std::string format = "text";
  int max_word_len = 8;
  long max_branches = 100000;
  int max_k = -1;
  bool no_collisions = false;
  int sessions = 1;
  long seed = 0;
  std::string config_path;

  ReductionLimits limits() const {
    ReductionLimits lim;
    lim.max_k = max_k;
    lim.max_branches = max_branches;
    lim.collisions = !no_collisions;
    return lim;
  }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// split on commas outside parentheses
std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// command-line flags take precedence over config entries
void apply_config(Options& o, const std::set<std::string>& given) {
  if (o.config_path.empty()) return;
  std::istringstream in(read_file(o.config_path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto at = line.find('#');
    if (at != std::string::npos) line = line.substr(0, at);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + " is not key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (given.count(key)) continue;
    if (key == "format") o.format = val;
    else if (key == "max_word_len") o.max_word_len = std::stoi(val);
    else if (key == "max_branches") o.max_branches = std::stol(val);
    else if (key == "max_k") o.max_k = std::stoi(val);
    else if (key == "collisions") o.no_collisions = (val == "false" || val == "0" || val == "no");
    else if (key == "sessions") o.sessions = std::stoi(val);
    else if (key == "seed") o.seed = std::stol(val);
    else throw std::runtime_error("unknown config key: " + key);
  }
}

// constraint files: knows: / deduce: / eq: / order: / goal: lines
struct ConstraintFile {
  ConstraintSystem system;
  std::vector<Term> final_knowledge;
  std::optional<Term> goal;
};

ConstraintFile parse_constraint_file(const std::string& text) {
  ConstraintFile out;
  std::vector<Term> knowledge;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto at = raw.find('#');
    if (at != std::string::npos) raw = raw.substr(0, at);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("knows:", 0) == 0) {
      for (const auto& item : split_terms(line.substr(6)))
        if (!trim(item).empty()) knowledge.push_back(parse_term(item));
    } else if (line.rfind("deduce:", 0) == 0) {
      std::string v = trim(line.substr(7));
      Term var = parse_term(v);
      if (!var.is_var()) throw ParseError("deduce expects a variable", lineno, 1);
      out.system.steps.push_back({knowledge, var.name()});
    } else if (line.rfind("eq:", 0) == 0) {
      std::string eq = line.substr(3);
      auto mid = eq.find('=');
      if (mid == std::string::npos) throw ParseError("eq expects `lhs = rhs`", lineno, 1);
      out.system.eqs.equations.emplace_back(parse_term(eq.substr(0, mid)),
                                            parse_term(eq.substr(mid + 1)));
    } else if (line.rfind("order:", 0) == 0) {
      std::string ord = line.substr(6);
      auto mid = ord.find('<');
      if (mid == std::string::npos) throw ParseError("order expects `x < c`", lineno, 1);
      Term lhs = parse_term(trim(ord.substr(0, mid)));
      Term rhs = parse_term(trim(ord.substr(mid + 1)));
      if (!(lhs.is_var() || lhs.is_const()) || !(rhs.is_var() || rhs.is_const()))
        throw ParseError("order expects atoms", lineno, 1);
      out.system.order.add(lhs.name(), rhs.name());
    } else if (line.rfind("goal:", 0) == 0) {
      out.goal = parse_term(line.substr(5));
    } else {
      throw ParseError("unrecognized line: " + line, lineno, 1);
    }
  }
  out.final_knowledge = knowledge;
  return out;
}

int verdict_exit(const Verdict& v) {
  if (v.is_sat()) return kExitYes;
  if (v.is_unsat()) return kExitNo;
  return kExitUnknown;
}

SystemTag tag_from_name(const std::string& name) {
  if (name == "au") return SystemTag::AU;
  if (name == "f") return SystemTag::F;
  if (name == "g") return SystemTag::G;
  if (name == "free") return SystemTag::FREE;
  if (name == "h") return SystemTag::H;
  throw std::runtime_error("unknown system: " + name);
}

void print_verdict_text(std::ostream& out, const Verdict& v) {
  out << "verdict: " << verdict_name(v) << "\n";
  if (v.is_sat())
    for (const auto& [var, val] : v.witness.map) out << "  " << var << " = " << val.str() << "\n";
  if (v.is_unknown()) out << "  bound exhausted: " << v.bound << "\n";
}

int cmd_analyze(const Options& opt, const std::string& path, std::ostream& out) {
  ProtocolSpec spec = parse_protocol(read_file(path));
  AttackReport rep = analyze_protocol(spec, opt.sessions, opt.limits(), opt.max_word_len);
  if (opt.format == "json") {
    json j = report_json(rep, /*with_timing=*/false);
    j["seed"] = opt.seed;
    out << j.dump(2) << "\n";
  } else {
    if (rep.verdict.is_sat()) {
      out << "ATTACK FOUND (" << rep.branches_tried << " branches tried, " << rep.wall_ms
          << " ms)\n";
      for (const auto& [var, val] : rep.verdict.witness.map)
        out << "  " << var << " = " << val.str() << "\n";
      for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        out << "derivation " << i + 1 << " (goal " << rep.trace[i].goal.str() << "):\n";
        for (const auto& s : rep.trace[i].steps) {
          out << "  [" << s.rule << "]";
          for (const auto& p : s.premises) out << " " << p.str();
          out << " => " << s.derived.str() << "\n";
        }
      }
    } else if (rep.verdict.is_unsat()) {
      out << "no attack (" << rep.branches_tried << " branches tried, " << rep.wall_ms
          << " ms)\n";
    } else {
      out << "unknown: limits exhausted (" << rep.branches_tried << " branches tried, "
          << rep.wall_ms << " ms)\n";
    }
  }
  return verdict_exit(rep.verdict);
}

int cmd_solve(const Options& opt, const std::string& path, const std::string& theory,
              std::ostream& out) {
  ConstraintFile file = parse_constraint_file(read_file(path));
  Verdict v;
  json extra;
  if (theory == "au") {
    v = solve_au(file.system, opt.max_word_len);
  } else if (theory == "f") {
    v = solve_compose(file.system, Kind::FApp);
  } else if (theory == "g") {
    v = solve_compose(file.system, Kind::GApp);
  } else if (theory == "free") {
    v = solve_free(file.system, opt.max_word_len);
  } else if (theory == "h") {
    HSolveResult r = solve_h(file.system, opt.limits(), opt.max_word_len);
    v = r.verdict;
    extra["branches_tried"] = r.branches_tried;
    extra["exhausted"] = r.exhausted;
  } else {
    throw std::runtime_error("unknown theory: " + theory);
  }
  if (opt.format == "json") {
    json j = verdict_json(v);
    for (auto& [key, val] : extra.items()) j[key] = val;
    j["seed"] = opt.seed;
    out << j.dump(2) << "\n";
  } else {
    print_verdict_text(out, v);
  }
  return verdict_exit(v);
}

int cmd_derive(const Options& opt, const std::string& path, const std::string& system,
               std::ostream& out) {
  ConstraintFile file = parse_constraint_file(read_file(path));
  if (!file.goal) throw std::runtime_error("derive needs a `goal:` line");
  SystemTag tag = tag_from_name(system);
  auto d = derivable(tag, file.final_knowledge, *file.goal);
  if (opt.format == "json") {
    json j;
    j["derivable"] = d.has_value();
    if (d) j["derivation"] = derivation_json(*d);
    j["seed"] = opt.seed;
    out << j.dump(2) << "\n";
  } else {
    if (d) {
      out << "derivable\n";
      for (const auto& s : d->steps) {
        out << "  [" << s.rule << "]";
        for (const auto& p : s.premises) out << " " << p.str();
        out << " => " << s.derived.str() << "\n";
      }
    } else {
      out << "not derivable\n";
    }
  }
  return d ? kExitYes : kExitNo;
}

int cmd_unify(const Options& opt, const std::string& path, bool syntactic, std::ostream& out) {
  UnificationSystem sys;
  OrderingConstraint ord;
  std::istringstream in(read_file(path));
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto at = raw.find('#');
    if (at != std::string::npos) raw = raw.substr(0, at);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("restrict ", 0) == 0) {
      std::string rest = line.substr(9);
      auto mid = rest.find('<');
      if (mid == std::string::npos) throw ParseError("restrict expects `?x < c`", lineno, 1);
      Term lhs = parse_term(trim(rest.substr(0, mid)));
      Term rhs = parse_term(trim(rest.substr(mid + 1)));
      if (!(lhs.is_var() || lhs.is_const()) || !(rhs.is_var() || rhs.is_const()))
        throw ParseError("restrict expects atoms", lineno, 1);
      ord.add(lhs.name(), rhs.name());
    } else {
      auto mid = line.find('=');
      if (mid == std::string::npos) throw ParseError("expected `lhs = rhs`", lineno, 1);
      sys.equations.emplace_back(parse_term(line.substr(0, mid)),
                                 parse_term(line.substr(mid + 1)));
    }
  }
  Verdict v = syntactic ? solve_syntactic_lcr(sys, ord) : solve_au_lcr(sys, ord, opt.max_word_len);
  if (opt.format == "json") {
    json j = verdict_json(v);
    j["seed"] = opt.seed;
    out << j.dump(2) << "\n";
  } else {
    print_verdict_text(out, v);
  }
  return verdict_exit(v);
}

int cmd_reduce(const Options& opt, const std::string& path, std::ostream& out) {
  ConstraintFile file = parse_constraint_file(read_file(path));
  auto branches = enumerate_reductions(file.system, opt.limits());
  if (opt.format == "json") {
    json j = json::array();
    for (const auto& b : branches) j.push_back(branch_json(b));
    json root;
    root["branches"] = j;
    root["count"] = branches.size();
    root["seed"] = opt.seed;
    out << root.dump(2) << "\n";
  } else {
    out << branches.size() << " branches\n";
    for (const auto& b : branches) {
      out << "k=" << b.k << " slots=[";
      for (std::size_t i = 0; i < b.slots.size(); ++i)
        out << (i ? "," : "") << b.slots[i];
      out << "] structures=[";
      for (std::size_t i = 0; i < b.structures.size(); ++i)
        out << (i ? "," : "") << b.structures[i];
      out << "]\n";
    }
  }
  return kExitNo;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"symbolic attack search for protocols with collision-vulnerable hashes", "symcol"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--format", opt.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-word-len", opt.max_word_len, "word solver budget per variable");
  app.add_option("--max-branches", opt.max_branches, "reduction branch cap");
  app.add_option("--max-k", opt.max_k, "cap on hash value classes (-1: automatic)");
  app.add_flag("--no-collisions", opt.no_collisions, "treat the hash as collision-free");
  app.add_option("--sessions", opt.sessions, "protocol session count");
  app.add_option("--seed", opt.seed, "seed recorded in the output");
  app.add_option("--config", opt.config_path, "key=value configuration file");

  std::string file;
  std::string theory = "h";
  std::string system = "h";
  bool syntactic = false;

  auto* analyze = app.add_subcommand("analyze", "search a protocol narration for attacks");
  analyze->add_option("file", file, "protocol file")->required();

  auto* solve = app.add_subcommand("solve", "solve a constraint system");
  solve->add_option("file", file, "constraint file")->required();
  solve->add_option("--theory", theory, "au, f, g, free or h")
      ->check(CLI::IsMember({"au", "f", "g", "free", "h"}));

  auto* derive = app.add_subcommand("derive", "check ground derivability");
  derive->add_option("file", file, "knowledge/goal file")->required();
  derive->add_option("--system", system, "au, f, g, free or h")
      ->check(CLI::IsMember({"au", "f", "g", "free", "h"}));

  auto* unify = app.add_subcommand("unify", "solve word equations with restrictions");
  unify->add_option("file", file, "equation file")->required();
  unify->add_flag("--syntactic", syntactic, "use syntactic f/g unification");

  auto* reduce = app.add_subcommand("reduce", "dump the hash-elimination branches");
  reduce->add_option("file", file, "constraint file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitNo;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitError;
  }

  try {
    std::set<std::string> given;
    if (app.count("--format")) given.insert("format");
    if (app.count("--max-word-len")) given.insert("max_word_len");
    if (app.count("--max-branches")) given.insert("max_branches");
    if (app.count("--max-k")) given.insert("max_k");
    if (app.count("--no-collisions")) given.insert("collisions");
    if (app.count("--sessions")) given.insert("sessions");
    if (app.count("--seed")) given.insert("seed");
    apply_config(opt, given);
    if (analyze->parsed()) return cmd_analyze(opt, file, out);
    if (solve->parsed()) return cmd_solve(opt, file, theory, out);
    if (derive->parsed()) return cmd_derive(opt, file, system, out);
    if (unify->parsed()) return cmd_unify(opt, file, syntactic, out);
    if (reduce->parsed()) return cmd_reduce(opt, file, out);
  } catch (const ParseError& e) {
    err << "parse error at " << e.line << ":" << e.column << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace symcol
