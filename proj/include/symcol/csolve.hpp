#pragma once

#include <string>
#include <vector>

#include "symcol/deduce.hpp"
#include "symcol/term.hpp"
#include "symcol/unify.hpp"

namespace symcol {

// One deduction constraint: the accumulated knowledge and the target
// variable the intruder must produce at this point.
struct ConstraintStep {
  std::vector<Term> knowledge;
  std::string target;  // sigiled variable name
};

struct ConstraintSystem {
  std::vector<ConstraintStep> steps;
  UnificationSystem eqs;
  OrderingConstraint order;

  std::set<std::string> var_names() const;
  std::set<std::string> const_names() const;
  std::vector<Term> all_terms() const;  // knowledge entries and equation sides
};

struct DeterminismReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Deterministic: knowledge grows monotonically and only mentions earlier
// targets.
DeterminismReport check_deterministic(const ConstraintSystem& c);

// Ordered satisfiability for the word intruder: derive an ordering from the
// constraints (target < each constant absent from its knowledge), merge with
// the input ordering, and solve the word equations under the restriction.
Verdict solve_au(const ConstraintSystem& c, int bound);

// Ordered satisfiability for the one-symbol composition intruder.
Verdict solve_compose(const ConstraintSystem& c, Kind sym);

// Ordered satisfiability for the combined word + f + g intruder, by block
// abstraction, identification/deduction guessing and dispatch to solve_au.
Verdict solve_free(const ConstraintSystem& c, int bound);

// Independent post-hoc check: every target derivable in the tagged system,
// equations satisfied modulo the tagged theory, ordering respected.
bool verify_solution(const ConstraintSystem& c, const Substitution& sigma, SystemTag tag);

// Per-constraint derivations for a verified solution.
std::vector<Derivation> solution_witnesses(const ConstraintSystem& c, const Substitution& sigma,
                                           SystemTag tag);

struct Solution {
  Substitution sigma;
  std::vector<Derivation> witnesses;
};

// Bundles a verified substitution with its replayable witnesses; nullopt if
// the substitution does not solve the system.
std::optional<Solution> make_solution(const ConstraintSystem& c, const Substitution& sigma,
                                      SystemTag tag);

}  // namespace symcol
