#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symcol/term.hpp"

namespace symcol {

// An equational presentation: named list of axioms with variable-only atoms.
// Construction rejects free constants in axioms and non-regular equations.
class EquationalPresentation {
 public:
  EquationalPresentation(std::string name, std::vector<std::pair<Term, Term>> axioms);

  const std::string& name() const { return name_; }
  const std::vector<std::pair<Term, Term>>& axioms() const { return axioms_; }

  static EquationalPresentation au();      // associativity + unit laws
  static EquationalPresentation e_h();     // au() plus the collision axiom
  static std::pair<Term, Term> collision_axiom();

 private:
  std::string name_;
  std::vector<std::pair<Term, Term>> axioms_;
};

// Re-canonicalizes a term (flat, eps-free concatenations). Identity on
// canonical input; exposed so callers holding externally built structures can
// normalize explicitly.
Term normalize(const Term& t);

bool eq_modulo_au(const Term& a, const Term& b);

// Ground equality modulo AU plus the hash-collision axiom
//   h(x1 . f(x1,x2,y1,y2) . x2) = h(y1 . g(x1,x2,y1,y2) . y2).
bool eq_modulo_h(const Term& a, const Term& b);

// All words m' with h(m') equal to h(m) by one collision-pattern application
// at the top of m (both orientations).
std::vector<Term> collision_partners(const Term& m);

// Every term equal to t modulo the collision axiom (t included). Throws if
// the class exceeds `cap` elements.
std::set<Term> eh_variants(const Term& t, std::size_t cap = 256);

struct ModedViolation {
  int equation;   // index into axioms()
  int side;       // 0 = left, 1 = right
  Position pos;   // offending position; root for signature mismatches
  std::string reason;
};

struct WellModedReport {
  bool ok = true;
  std::vector<ModedViolation> violations;
};

WellModedReport check_well_moded(const EquationalPresentation& p, const ModeTable& m);

}  // namespace symcol
