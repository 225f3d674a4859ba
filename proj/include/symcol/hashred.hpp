#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcol/csolve.hpp"

namespace symcol {

struct ReductionLimits {
  int max_k = -1;             // -1: number of h-rooted subterm values
  long max_branches = 100000;
  bool collisions = true;     // false: drop the collision cases of the split
};

// A fully instantiated choice of Algorithm-1 guesses and the resulting
// hash-free constraint system.
struct ReductionBranch {
  int k = 0;
  std::vector<std::vector<Term>> classes;     // h-rooted subterm values
  std::vector<std::string> preimage_vars;     // one per class
  std::vector<std::string> value_consts;      // opaque hash-value letters
  std::vector<int> slots;                     // -1 material, else 0-based slot
  // per class: 0 = all members share the pre-image; otherwise an encoding of
  // the collision split (which members sit on the f-side and where the
  // pre-image variable sits)
  std::vector<int> structures;
  ConstraintSystem reduced;
  std::string fingerprint;
};

// Sub(C) restricted to h-rooted terms, in canonical order.
std::vector<Term> hash_subterm_values(const ConstraintSystem& c);

// The distinct hash values of a minimal solution all come from h-rooted
// subterm values or variables, which caps the useful class count.
bool class_count_admissible(int k, const ConstraintSystem& c);

// Streams branches in a fixed order (k ascending, then class partition, then
// deduction slots, then split structures). Stops when fn returns false or the
// branch cap is reached. Returns true when the whole space was enumerated.
bool for_each_reduction(const ConstraintSystem& c, const ReductionLimits& limits,
                        const std::function<bool(const ReductionBranch&)>& fn);

std::vector<ReductionBranch> enumerate_reductions(const ConstraintSystem& c,
                                                  const ReductionLimits& limits);

struct HSolveResult {
  Verdict verdict;
  std::optional<ReductionBranch> branch;  // branch the witness came from
  std::vector<Derivation> trace;          // per-constraint hash-system witnesses
  long branches_tried = 0;
  bool exhausted = false;                 // full space covered within limits
};

HSolveResult solve_h(const ConstraintSystem& c, const ReductionLimits& limits, int bound);

}  // namespace symcol
