#pragma once

#include <string>
#include <vector>

#include "symcol/csolve.hpp"
#include "symcol/hashred.hpp"

namespace symcol {

// A protocol narration: declared roles, initial public knowledge, ordered
// message exchanges, and one goal. Variables in messages are receive
// patterns, bound at their first occurrence; the network is the intruder.
struct ProtocolMessage {
  std::string sender;
  std::string receiver;
  Term body;
};

struct ProtocolSpec {
  std::vector<std::string> roles;
  std::vector<Term> init_knowledge;
  std::vector<ProtocolMessage> messages;
  enum class GoalKind { None, Secret, Forge } goal_kind = GoalKind::None;
  Term goal_lhs;
  Term goal_rhs;  // Forge only
};

ProtocolSpec parse_protocol(const std::string& text);

// Bounded-session expansion into a deterministic constraint system. Each
// message first binds its fresh receive variables as intruder targets, then
// requires the whole delivered message to be derivable, then enters the
// knowledge; messages without fresh variables enter the knowledge first
// (the honest sender is their source).
ConstraintSystem protocol_to_constraints(const ProtocolSpec& p, int sessions);

struct AttackReport {
  Verdict verdict;
  std::string branch_fingerprint;
  std::vector<Derivation> trace;
  long branches_tried = 0;
  bool exhausted = false;
  double wall_ms = 0;
  ReductionLimits limits;
  int word_bound = 0;
};

AttackReport analyze_protocol(const ProtocolSpec& p, int sessions, const ReductionLimits& limits,
                              int word_bound);

}  // namespace symcol
