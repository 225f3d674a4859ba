#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symcol/term.hpp"

namespace symcol {

// The five intruder systems, plus S0H: the hash system with the hash rule
// removed (rules of signature 0 only), used by the derivation-shape checks.
enum class SystemTag { AU, F, G, FREE, H, S0H };

std::string system_name(SystemTag tag);

// Rule-set descriptor. FREE is the disjoint union of AU, F and G; H adds the
// hash rule on top of FREE.
struct IntruderSystem {
  SystemTag tag;
  bool word_rules;  // concatenation, prefix, suffix, empty word
  bool compose_f;
  bool compose_g;
  bool hash_rule;
  bool collision_theory;  // derivations taken modulo the collision equation

  static IntruderSystem of(SystemTag tag);
};

struct Step {
  std::string rule;  // eps | concat | prefix | suffix | compose_f | compose_g | hash | hc
  std::vector<Term> premises;
  Term derived;
};

struct Derivation {
  std::vector<Term> initial;
  std::vector<Step> steps;
  Term goal;
};

// Checks a derivation against the rule semantics: every premise is initial or
// previously derived, every step derives what its rule allows ("hc" steps may
// replace a term by a collision-equal one), and the goal is reached.
bool replay(const Derivation& d);

std::optional<Derivation> derivable_au(const std::vector<Term>& knowledge, const Term& goal);
std::optional<Derivation> derivable_compose(const std::vector<Term>& knowledge, const Term& goal,
                                            Kind sym);
std::optional<Derivation> derivable_free(const std::vector<Term>& knowledge, const Term& goal);
std::optional<Derivation> derivable_h(const std::vector<Term>& knowledge, const Term& goal);

std::optional<Derivation> derivable(SystemTag tag, const std::vector<Term>& knowledge,
                                    const Term& goal);

// Exhaustive bounded closure, the test oracle. Applies every rule of the
// system to the current set `depth` times, keeping only terms of at most
// `max_size` nodes (0 picks max input size + goal allowance). For the hash
// systems the set is kept closed under collision variants.
std::set<Term> closure_bfs(const std::vector<Term>& knowledge, int depth, SystemTag tag,
                           std::size_t max_size = 0);

// Membership modulo the system's theory (collision-aware for H and S0H).
bool closure_contains(const std::set<Term>& closure, const Term& t, SystemTag tag);

}  // namespace symcol
