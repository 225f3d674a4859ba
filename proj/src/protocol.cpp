#include "symcol/protocol.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "symcol/theory.hpp"

namespace symcol {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError(msg, line, 1);
}

}  // namespace

ProtocolSpec parse_protocol(const std::string& text) {
  ProtocolSpec p;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash_at = raw.find('#');
    if (hash_at != std::string::npos) raw = raw.substr(0, hash_at);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.rfind("role ", 0) == 0) {
      std::string name = trim(line.substr(5));
      if (name.empty()) fail(lineno, "role needs a name");
      p.roles.push_back(name);
    } else if (line.rfind("init ", 0) == 0) {
      int depth = 0;
      std::string cur;
      std::vector<std::string> items;
      for (char ch : line.substr(5)) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
          items.push_back(cur);
          cur.clear();
        } else {
          cur += ch;
        }
      }
      items.push_back(cur);
      for (auto& item : items) {
        item = trim(item);
        if (item.empty()) fail(lineno, "empty init entry");
        p.init_knowledge.push_back(parse_term(item));
      }
    } else if (line.rfind("msg ", 0) == 0) {
      auto arrow = line.find("->");
      auto colon = line.find(':');
      if (arrow == std::string::npos || colon == std::string::npos || colon < arrow)
        fail(lineno, "expected `msg A -> B : term`");
      ProtocolMessage m;
      m.sender = trim(line.substr(4, arrow - 4));
      m.receiver = trim(line.substr(arrow + 2, colon - arrow - 2));
      if (m.sender.empty() || m.receiver.empty()) fail(lineno, "message needs two roles");
      bool known_s = false, known_r = false;
      for (const auto& r : p.roles) {
        known_s |= r == m.sender;
        known_r |= r == m.receiver;
      }
      if (!known_s) fail(lineno, "undeclared role: " + m.sender);
      if (!known_r) fail(lineno, "undeclared role: " + m.receiver);
      m.body = parse_term(line.substr(colon + 1));
      auto check_fg = [&](const Term& t) {
        std::function<bool(const Term&)> has = [&](const Term& u) {
          if (u.is_block()) return true;
          for (const auto& a : u.args())
            if (has(a)) return true;
          return false;
        };
        return has(t);
      };
      if (check_fg(m.body))
        fail(lineno, "protocol messages use concatenation and hash only");
      p.messages.push_back(std::move(m));
    } else if (line.rfind("goal ", 0) == 0) {
      if (p.goal_kind != ProtocolSpec::GoalKind::None) fail(lineno, "multiple goals");
      std::string rest = trim(line.substr(5));
      if (rest.rfind("secret ", 0) == 0) {
        p.goal_kind = ProtocolSpec::GoalKind::Secret;
        p.goal_lhs = parse_term(rest.substr(7));
      } else if (rest.rfind("forge ", 0) == 0) {
        std::string eq = rest.substr(6);
        auto at = eq.find('=');
        if (at == std::string::npos) fail(lineno, "forge goal needs `lhs = rhs`");
        p.goal_kind = ProtocolSpec::GoalKind::Forge;
        p.goal_lhs = parse_term(eq.substr(0, at));
        p.goal_rhs = parse_term(eq.substr(at + 1));
      } else {
        fail(lineno, "goal is `secret term` or `forge lhs = rhs`");
      }
    } else {
      fail(lineno, "unrecognized line: " + line);
    }
  }
  if (p.goal_kind == ProtocolSpec::GoalKind::None) fail(lineno, "protocol needs a goal");
  return p;
}

namespace {

// rename session-local variables: ?x -> ?x_sN for sessions beyond the first
Term session_rename(const Term& t, int session) {
  if (session <= 1) return t;
  switch (t.kind()) {
    case Kind::Var:
      return Term::var(t.name() + "_s" + std::to_string(session));
    case Kind::Const:
    case Kind::Eps:
      return t;
    case Kind::Cat: {
      std::vector<Term> parts;
      for (const auto& a : t.args()) parts.push_back(session_rename(a, session));
      return Term::cat(std::move(parts));
    }
    case Kind::Hash:
      return Term::hash(session_rename(t.args()[0], session));
    default: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(session_rename(a, session));
      return t.kind() == Kind::FApp ? Term::fapp(std::move(args)) : Term::gapp(std::move(args));
    }
  }
}

void vars_in_order(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) vars_in_order(a, out, seen);
}

}  // namespace

ConstraintSystem protocol_to_constraints(const ProtocolSpec& p, int sessions) {
  if (sessions < 1) throw std::invalid_argument("sessions must be at least 1");
  ConstraintSystem c;
  std::vector<Term> knowledge = p.init_knowledge;
  std::set<std::string> bound;
  int recv_counter = 0;

  auto add_targets_for = [&](const Term& t) {
    std::vector<std::string> fresh;
    std::set<std::string> seen;
    vars_in_order(t, fresh, seen);
    std::vector<std::string> added;
    for (const auto& v : fresh)
      if (bound.insert(v).second) added.push_back(v);
    for (const auto& v : added) c.steps.push_back({knowledge, v});
    return !added.empty();
  };

  for (int s = 1; s <= sessions; ++s) {
    for (const auto& msg : p.messages) {
      Term body = session_rename(msg.body, s);
      bool fresh_vars = add_targets_for(body);
      if (fresh_vars) {
        // the receiver's pattern binds new values: the intruder supplies the
        // whole message before anyone can have sent it
        std::string rv = "?rcv#" + std::to_string(recv_counter++);
        c.steps.push_back({knowledge, rv});
        c.eqs.equations.emplace_back(Term::var(rv), body);
        knowledge.push_back(body);
      } else {
        // fully determined message: the honest sender is its source
        knowledge.push_back(body);
        std::string rv = "?rcv#" + std::to_string(recv_counter++);
        c.steps.push_back({knowledge, rv});
        c.eqs.equations.emplace_back(Term::var(rv), body);
      }
    }
  }

  Term lhs = p.goal_lhs;
  if (p.goal_kind == ProtocolSpec::GoalKind::Secret) {
    add_targets_for(lhs);
    std::string gv = "?goal#0";
    c.steps.push_back({knowledge, gv});
    c.eqs.equations.emplace_back(Term::var(gv), lhs);
  } else if (p.goal_kind == ProtocolSpec::GoalKind::Forge) {
    add_targets_for(lhs);
    add_targets_for(p.goal_rhs);
    c.eqs.equations.emplace_back(lhs, p.goal_rhs);
  }

  auto rep = check_deterministic(c);
  if (!rep.ok)
    throw std::logic_error("protocol expansion produced a non-deterministic system: " +
                           (rep.violations.empty() ? "" : rep.violations.front()));
  return c;
}

AttackReport analyze_protocol(const ProtocolSpec& p, int sessions, const ReductionLimits& limits,
                              int word_bound) {
  auto t0 = std::chrono::steady_clock::now();
  ConstraintSystem c = protocol_to_constraints(p, sessions);
  HSolveResult r = solve_h(c, limits, word_bound);

  AttackReport rep;
  rep.verdict = r.verdict;
  rep.trace = std::move(r.trace);
  rep.branches_tried = r.branches_tried;
  rep.exhausted = r.exhausted;
  rep.limits = limits;
  rep.word_bound = word_bound;
  if (r.branch) rep.branch_fingerprint = r.branch->fingerprint;
  if (rep.verdict.is_sat()) {
    if (!verify_solution(c, rep.verdict.witness, SystemTag::H))
      throw std::logic_error("attack witness failed verification");
    // justify equations that hold only modulo the collision equation: derive
    // the value the checking side expects, which surfaces the hc step
    const auto& sigma = rep.verdict.witness;
    std::vector<Term> final_knowledge;
    if (!c.steps.empty()) final_knowledge = sigma.apply(c.steps.back().knowledge);
    for (const auto& [l, rr] : c.eqs.equations) {
      Term ls = sigma.apply(l), rs = sigma.apply(rr);
      if (ls == rs) continue;
      if (auto d = derivable_h(final_knowledge, rs)) rep.trace.push_back(std::move(*d));
    }
    for (const auto& d : rep.trace)
      if (!replay(d)) throw std::logic_error("attack trace failed to replay");
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace symcol
