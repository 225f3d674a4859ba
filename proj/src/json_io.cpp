#include "symcol/json_io.hpp"

namespace symcol {

json term_json(const Term& t) { return t.str(); }

json substitution_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [v, t] : s.map) out[v] = t.str();
  return out;
}

json derivation_json(const Derivation& d) {
  json steps = json::array();
  for (const auto& s : d.steps) {
    json prem = json::array();
    for (const auto& p : s.premises) prem.push_back(p.str());
    steps.push_back({{"rule", s.rule}, {"premises", prem}, {"derived", s.derived.str()}});
  }
  json initial = json::array();
  for (const auto& t : d.initial) initial.push_back(t.str());
  return {{"goal", d.goal.str()}, {"initial", initial}, {"steps", steps}};
}

json verdict_json(const Verdict& v) {
  json out;
  out["verdict"] = verdict_name(v);
  if (v.is_sat()) out["witness"] = substitution_json(v.witness);
  if (v.is_unknown()) out["bound"] = v.bound;
  return out;
}

json system_json(const ConstraintSystem& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json know = json::array();
    for (const auto& t : s.knowledge) know.push_back(t.str());
    steps.push_back({{"knowledge", know}, {"target", s.target}});
  }
  json eqs = json::array();
  for (const auto& [l, r] : c.eqs.equations)
    eqs.push_back({{"lhs", l.str()}, {"rhs", r.str()}});
  json ord = json::array();
  for (const auto& [a, b] : c.order.pairs) ord.push_back({{"lhs", a}, {"rhs", b}});
  return {{"constraints", steps}, {"equations", eqs}, {"order", ord}};
}

json branch_json(const ReductionBranch& b) {
  json classes = json::array();
  for (const auto& cls : b.classes) {
    json members = json::array();
    for (const auto& m : cls) members.push_back(m.str());
    classes.push_back(members);
  }
  return {{"k", b.k},
          {"classes", classes},
          {"preimage_vars", b.preimage_vars},
          {"value_consts", b.value_consts},
          {"slots", b.slots},
          {"structures", b.structures},
          {"fingerprint", b.fingerprint},
          {"system", system_json(b.reduced)}};
}

json report_json(const AttackReport& r, bool with_timing) {
  json out;
  out["verdict"] = verdict_name(r.verdict);
  out["attack"] = r.verdict.is_sat();
  if (r.verdict.is_sat()) {
    out["branch"] = r.branch_fingerprint;
    out["substitution"] = substitution_json(r.verdict.witness);
    json trace = json::array();
    for (const auto& d : r.trace) trace.push_back(derivation_json(d));
    out["trace"] = trace;
  }
  if (r.verdict.is_unknown()) out["bound"] = r.verdict.bound;
  out["branches_tried"] = r.branches_tried;
  out["exhausted"] = r.exhausted;
  out["limits"] = {{"max_k", r.limits.max_k},
                   {"max_branches", r.limits.max_branches},
                   {"collisions", r.limits.collisions},
                   {"word_bound", r.word_bound}};
  if (with_timing) out["wall_ms"] = r.wall_ms;
  return out;
}

}  // namespace symcol
