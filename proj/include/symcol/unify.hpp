#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcol/term.hpp"

namespace symcol {

struct UnificationSystem {
  std::vector<std::pair<Term, Term>> equations;
};

// Ordering constraints over atom names (variables carry their sigil).
// Solutions are filtered by the pairs whose left side is a variable and whose
// right side is a constant: x < c forbids c anywhere inside x's value.
struct OrderingConstraint {
  std::vector<std::pair<std::string, std::string>> pairs;

  void add(const std::string& lhs, const std::string& rhs);
  bool is_partial_order() const;  // no cycle through the transitive closure
  // constants forbidden for a given variable (transitively closed over
  // var < var chains)
  std::set<std::string> forbidden_for(const std::string& var) const;
  bool allows(const Substitution& s) const;
};

struct Verdict {
  enum class Kind { Sat, Unsat, Unknown } kind = Kind::Unknown;
  Substitution witness;  // Sat only
  int bound = 0;         // Unknown: the exhausted per-variable budget

  static Verdict sat(Substitution w) { return {Kind::Sat, std::move(w), 0}; }
  static Verdict unsat() { return {Kind::Unsat, {}, 0}; }
  static Verdict unknown(int bound) { return {Kind::Unknown, {}, bound}; }
  bool is_sat() const { return kind == Kind::Sat; }
  bool is_unsat() const { return kind == Kind::Unsat; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

std::string verdict_name(const Verdict& v);

// Word unification with linear constant restrictions, by Nielsen
// transformations with a per-variable prepend budget and state subsumption.
// Unsat is reported only when the search space is exhausted below the budget.
Verdict solve_au_lcr(const UnificationSystem& s, const OrderingConstraint& ord, int bound);

// Syntactic unification for f/g terms with restriction filtering; decides.
Verdict solve_syntactic_lcr(const UnificationSystem& s, const OrderingConstraint& ord);

// Exhaustive oracle over ground substitutions with |x sigma| <= maxlen.
Verdict brute_force_unify(const UnificationSystem& s, const OrderingConstraint& ord,
                          const std::vector<std::string>& alphabet, int maxlen);

// Robinson unification used by the constraint solvers; nullopt on clash or
// occurs-check failure.
std::optional<Substitution> mgu_syntactic(const UnificationSystem& s);

bool satisfies_au(const UnificationSystem& s, const Substitution& sigma);

}  // namespace symcol
