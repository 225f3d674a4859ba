#include "symcol/csolve.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "symcol/theory.hpp"

namespace symcol {

std::set<std::string> ConstraintSystem::var_names() const {
  std::set<std::string> out;
  for (const auto& s : steps) {
    out.insert(s.target);
    for (const auto& t : s.knowledge) {
      auto v = t.var_names();
      out.insert(v.begin(), v.end());
    }
  }
  for (const auto& [l, r] : eqs.equations) {
    auto vl = l.var_names(), vr = r.var_names();
    out.insert(vl.begin(), vl.end());
    out.insert(vr.begin(), vr.end());
  }
  return out;
}

std::set<std::string> ConstraintSystem::const_names() const {
  std::set<std::string> out;
  for (const Term& t : all_terms()) {
    auto c = t.const_names();
    out.insert(c.begin(), c.end());
  }
  return out;
}

std::vector<Term> ConstraintSystem::all_terms() const {
  std::vector<Term> out;
  for (const auto& s : steps)
    for (const auto& t : s.knowledge) out.push_back(t);
  for (const auto& [l, r] : eqs.equations) {
    out.push_back(l);
    out.push_back(r);
  }
  return out;
}

DeterminismReport check_deterministic(const ConstraintSystem& c) {
  DeterminismReport rep;
  std::set<std::string> earlier;
  std::set<Term> prev;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const auto& step = c.steps[i];
    if (step.target.empty() || step.target[0] != '?') {
      rep.ok = false;
      rep.violations.push_back("target of constraint " + std::to_string(i + 1) +
                               " is not a ?-variable: " + step.target);
    }
    std::set<Term> cur;
    for (const auto& t : step.knowledge) {
      cur.insert(normalize(t));
      for (const auto& v : t.var_names())
        if (!earlier.count(v)) {
          rep.ok = false;
          rep.violations.push_back("knowledge of constraint " + std::to_string(i + 1) +
                                   " mentions " + v + " before it is deduced");
        }
    }
    for (const auto& p : prev)
      if (!cur.count(p)) {
        rep.ok = false;
        rep.violations.push_back("knowledge of constraint " + std::to_string(i + 1) +
                                 " drops " + p.str());
      }
    prev = std::move(cur);
    earlier.insert(step.target);
  }
  return rep;
}

namespace {

bool term_contains(const Term& t, Kind k) {
  if (t.kind() == k) return true;
  for (const auto& a : t.args())
    if (term_contains(a, k)) return true;
  return false;
}

void require_deterministic(const ConstraintSystem& c) {
  auto rep = check_deterministic(c);
  if (!rep.ok)
    throw std::invalid_argument("constraint system is not deterministic: " +
                                (rep.violations.empty() ? "" : rep.violations.front()));
}

Substitution ground_targets_eps(const ConstraintSystem& c, Substitution sigma) {
  for (const auto& v : c.var_names())
    if (!sigma.find(v)) sigma.bind(v, Term::eps());
  return sigma;
}

}  // namespace

bool verify_solution(const ConstraintSystem& c, const Substitution& sigma, SystemTag tag) {
  for (const auto& v : c.var_names()) {
    const Term* t = sigma.find(v);
    if (!t || !t->is_ground()) return false;
  }
  for (const auto& step : c.steps) {
    auto know = sigma.apply(step.knowledge);
    Term goal = sigma.apply(Term::var(step.target));
    try {
      if (!derivable(tag, know, goal)) return false;
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  for (const auto& [l, r] : c.eqs.equations) {
    Term ls = sigma.apply(l), rs = sigma.apply(r);
    bool ok = tag == SystemTag::H ? eq_modulo_h(ls, rs) : eq_modulo_au(ls, rs);
    if (!ok) return false;
  }
  return c.order.allows(sigma);
}

std::vector<Derivation> solution_witnesses(const ConstraintSystem& c, const Substitution& sigma,
                                           SystemTag tag) {
  std::vector<Derivation> out;
  for (const auto& step : c.steps) {
    auto d = derivable(tag, sigma.apply(step.knowledge), sigma.apply(Term::var(step.target)));
    if (!d) throw std::logic_error("solution_witnesses: unverified solution");
    out.push_back(std::move(*d));
  }
  return out;
}

std::optional<Solution> make_solution(const ConstraintSystem& c, const Substitution& sigma,
                                      SystemTag tag) {
  if (!verify_solution(c, sigma, tag)) return std::nullopt;
  return Solution{sigma, solution_witnesses(c, sigma, tag)};
}

// ---- word-theory constraints (ordering construction) ----

Verdict solve_au(const ConstraintSystem& c, int bound) {
  require_deterministic(c);
  for (const auto& t : c.all_terms())
    if (term_contains(t, Kind::Hash) || term_contains(t, Kind::FApp) ||
        term_contains(t, Kind::GApp))
      throw std::invalid_argument("solve_au expects a word system: " + t.str());
  if (!c.order.is_partial_order())
    throw std::invalid_argument("ordering constraint contains a cycle");

  const auto all_consts = c.const_names();
  OrderingConstraint merged = c.order;
  for (const auto& step : c.steps) {
    std::set<std::string> present;
    for (const auto& t : step.knowledge) {
      auto cs = t.const_names();
      present.insert(cs.begin(), cs.end());
    }
    for (const auto& cname : all_consts)
      if (!present.count(cname)) merged.add(step.target, cname);
  }
  if (!merged.is_partial_order()) return Verdict::unsat();

  Verdict v = solve_au_lcr(c.eqs, merged, bound);
  if (!v.is_sat()) return v;

  Substitution sigma = ground_targets_eps(c, std::move(v.witness));
  if (!verify_solution(c, sigma, SystemTag::AU))
    throw std::logic_error("solve_au produced an unverifiable solution");
  return Verdict::sat(std::move(sigma));
}

// ---- one-symbol composition constraints ----

namespace {

struct ComposeSearch {
  Kind sym;
  const ConstraintSystem* sys = nullptr;
  std::optional<Substitution> found;

  // stream of unifier extensions deriving `goal` from `know`; calls sink for
  // each candidate binding, stops early once sink returns true
  bool solve_goal(const Term& goal, const std::vector<Term>& know, const Substitution& theta,
                  const std::function<bool(const Substitution&)>& sink) {
    Term g = theta.apply(goal);
    // reuse of a knowledge member
    for (const auto& e : know) {
      UnificationSystem u;
      u.equations.emplace_back(g, theta.apply(e));
      if (auto m = mgu_syntactic(u)) {
        if (sink(theta.compose_under(*m))) return true;
      }
    }
    // composition of the matching symbol
    if (g.kind() == sym && g.args().size() == 4) {
      std::function<bool(std::size_t, const Substitution&)> chain =
          [&](std::size_t idx, const Substitution& th) -> bool {
        if (idx == 4) return sink(th);
        return solve_goal(g.args()[idx], know, th,
                          [&](const Substitution& th2) { return chain(idx + 1, th2); });
      };
      if (chain(0, theta)) return true;
    }
    return false;
  }

  bool run(std::size_t slot, const Substitution& theta) {
    if (slot == sys->steps.size()) {
      // ground leftover variables with a constant foreign to the system
      std::set<std::string> used = sys->const_names();
      std::string fresh = "w0";
      for (int i = 0; used.count(fresh); ++i) fresh = "w" + std::to_string(i);
      Substitution sigma;
      for (const auto& v : sys->var_names()) {
        Term val = theta.apply(Term::var(v));
        Substitution gf;
        for (const auto& fv : val.var_names()) gf.bind(fv, Term::constant(fresh));
        sigma.bind(v, gf.apply(val));
      }
      if (!verify_solution(*sys, sigma, sym == Kind::FApp ? SystemTag::F : SystemTag::G))
        return false;
      found = sigma;
      return true;
    }
    const auto& step = sys->steps[slot];
    return solve_goal(Term::var(step.target), step.knowledge, theta,
                      [&](const Substitution& th) { return run(slot + 1, th); });
  }
};

void check_compose_operand(const Term& t, Kind sym) {
  if (t.is_cat() || t.is_hash() || t.is_eps() || (t.is_block() && t.kind() != sym))
    throw std::invalid_argument("solve_compose expects one symbol, atoms and variables: " +
                                t.str());
  for (const auto& a : t.args()) check_compose_operand(a, sym);
}

}  // namespace

Verdict solve_compose(const ConstraintSystem& c, Kind sym) {
  if (sym != Kind::FApp && sym != Kind::GApp)
    throw std::invalid_argument("solve_compose expects f or g");
  require_deterministic(c);
  for (const auto& t : c.all_terms()) check_compose_operand(t, sym);
  if (!c.order.is_partial_order())
    throw std::invalid_argument("ordering constraint contains a cycle");

  auto theta0 = mgu_syntactic(c.eqs);
  if (!theta0) return Verdict::unsat();

  ComposeSearch search;
  search.sym = sym;
  search.sys = &c;
  search.run(0, *theta0);
  if (search.found) return Verdict::sat(std::move(*search.found));
  return Verdict::unsat();
}

// ---- combined theory: block abstraction + dispatch ----

namespace {

void collect_blocks(const Term& t, std::set<Term>& out) {
  if (t.is_block()) out.insert(t);
  for (const auto& a : t.args()) collect_blocks(a, out);
}

// replace every maximal block occurrence by its class letter
Term abstract_blocks(const Term& t, const std::map<Term, Term>& letter_of) {
  if (t.is_block()) {
    auto it = letter_of.find(t);
    if (it != letter_of.end()) return it->second;
  }
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::Eps:
      return t;
    case Kind::Cat: {
      std::vector<Term> parts;
      for (const auto& a : t.args()) parts.push_back(abstract_blocks(a, letter_of));
      return Term::cat(std::move(parts));
    }
    case Kind::Hash:
      return Term::hash(abstract_blocks(t.args()[0], letter_of));
    case Kind::FApp:
    case Kind::GApp: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(abstract_blocks(a, letter_of));
      return t.kind() == Kind::FApp ? Term::fapp(std::move(args)) : Term::gapp(std::move(args));
    }
  }
  return t;
}

// set partitions as restricted growth strings
std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxg) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (int g = 0; g <= maxg + 1; ++g) {
      rgs[i] = g;
      rec(i + 1, std::max(maxg, g));
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(0, -1);
  return out;
}

bool is_pure_word_system(const ConstraintSystem& c) {
  for (const auto& t : c.all_terms())
    if (term_contains(t, Kind::FApp) || term_contains(t, Kind::GApp)) return false;
  return true;
}

bool is_pure_compose_system(const ConstraintSystem& c, Kind sym) {
  for (const auto& t : c.all_terms()) {
    std::function<bool(const Term&)> ok = [&](const Term& u) {
      if (u.is_cat() || u.is_hash() || u.is_eps()) return false;
      if (u.is_block() && u.kind() != sym) return false;
      for (const auto& a : u.args())
        if (!ok(a)) return false;
      return true;
    };
    if (!ok(t)) return false;
  }
  return true;
}

struct BlockClass {
  Kind sym;
  std::vector<Term> members;   // original (unabstracted) blocks
  std::string letter;          // abstraction constant
};

// expand class letters into ground block values; false on cyclic dependency
bool resolve_block_values(const std::vector<BlockClass>& classes,
                          const std::vector<std::vector<Term>>& class_args,
                          std::map<std::string, Term>& values) {
  std::map<std::string, int> state;
  std::function<bool(std::size_t)> build = [&](std::size_t ci) -> bool {
    const std::string& name = classes[ci].letter;
    if (state[name] == 2) return true;
    if (state[name] == 1) return false;  // cycle
    state[name] = 1;
    std::vector<Term> args;
    for (const auto& a : class_args[ci]) {
      // replace nested class letters inside the argument
      std::function<std::optional<Term>(const Term&)> expand =
          [&](const Term& t) -> std::optional<Term> {
        if (t.is_const()) {
          for (std::size_t cj = 0; cj < classes.size(); ++cj)
            if (classes[cj].letter == t.name()) {
              if (!build(cj)) return std::nullopt;
              return values.at(t.name());
            }
          return t;
        }
        if (t.is_cat()) {
          std::vector<Term> parts;
          for (const auto& p : t.args()) {
            auto e = expand(p);
            if (!e) return std::nullopt;
            parts.push_back(*e);
          }
          return Term::cat(std::move(parts));
        }
        return t;  // vars cannot appear in ground class arguments
      };
      auto e = expand(a);
      if (!e) return false;
      args.push_back(*e);
    }
    values[name] = classes[ci].sym == Kind::FApp ? Term::fapp(args) : Term::gapp(args);
    state[name] = 2;
    return true;
  };
  for (std::size_t ci = 0; ci < classes.size(); ++ci)
    if (!build(ci)) return false;
  return true;
}

}  // namespace

Verdict solve_free(const ConstraintSystem& c, int bound) {
  require_deterministic(c);
  for (const auto& t : c.all_terms())
    if (term_contains(t, Kind::Hash))
      throw std::invalid_argument("solve_free rejects hash terms: " + t.str());
  if (!c.order.is_partial_order())
    throw std::invalid_argument("ordering constraint contains a cycle");

  if (is_pure_word_system(c)) return solve_au(c, bound);
  if (is_pure_compose_system(c, Kind::FApp)) return solve_compose(c, Kind::FApp);
  if (is_pure_compose_system(c, Kind::GApp)) return solve_compose(c, Kind::GApp);

  // blocks, innermost first so nested blocks abstract cleanly
  std::set<Term> block_set;
  for (const auto& t : c.all_terms()) collect_blocks(t, block_set);
  std::vector<Term> blocks(block_set.begin(), block_set.end());
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Term& a, const Term& b) { return a.size() < b.size(); });
  const int nb = static_cast<int>(blocks.size());
  const std::size_t nsteps = c.steps.size();

  bool unknown_seen = false, rejected_candidate = false;
  int unknown_bound = 0;

  // fewest identifications first: the discrete partition leads
  auto partitions = partitions_of(nb);
  std::stable_sort(partitions.begin(), partitions.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int ga = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
                     int gb = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
                     return ga > gb;
                   });
  for (const auto& rgs : partitions) {
    // same-symbol classes only
    int ngroups = nb == 0 ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    bool compatible = true;
    for (int i = 0; i < nb && compatible; ++i)
      for (int j = i + 1; j < nb && compatible; ++j)
        if (rgs[i] == rgs[j] && blocks[i].kind() != blocks[j].kind()) compatible = false;
    if (!compatible) continue;

    std::vector<BlockClass> classes(ngroups);
    for (int i = 0; i < nb; ++i) {
      classes[rgs[i]].sym = blocks[i].kind();
      classes[rgs[i]].members.push_back(blocks[i]);
    }
    std::map<Term, Term> letter_of;
    for (int g = 0; g < ngroups; ++g) {
      classes[g].letter = "blk#" + std::to_string(g);
      for (const auto& m : classes[g].members)
        letter_of[m] = Term::constant(classes[g].letter);
    }

    // abstracted class arguments (first member is the representative)
    std::vector<std::vector<Term>> class_args(ngroups);
    UnificationSystem link_eqs;
    for (int g = 0; g < ngroups; ++g) {
      const Term& rep = classes[g].members.front();
      for (const auto& a : rep.args())
        class_args[g].push_back(abstract_blocks(a, letter_of));
      for (std::size_t m = 1; m < classes[g].members.size(); ++m) {
        const Term& other = classes[g].members[m];
        for (std::size_t ai = 0; ai < rep.args().size(); ++ai)
          link_eqs.equations.emplace_back(class_args[g][ai],
                                          abstract_blocks(other.args()[ai], letter_of));
      }
    }

    // the deduction slots only restrict solutions further; when the equations
    // alone are unsolvable the whole partition is dead
    {
      UnificationSystem basic = link_eqs;
      for (const auto& [l, r] : c.eqs.equations)
        basic.equations.emplace_back(abstract_blocks(l, letter_of),
                                     abstract_blocks(r, letter_of));
      Verdict pre = solve_au_lcr(basic, OrderingConstraint{}, bound);
      if (pre.is_unsat()) continue;
    }

    // deduction slots: each class either relies on material occurrences or is
    // composed by the intruder just before one of the targets
    std::vector<int> slot(ngroups, -1);  // -1 = not deduced
    while (true) {
      // build the abstracted AU system for this placement
      ConstraintSystem au;
      au.order = c.order;
      au.eqs = link_eqs;
      for (const auto& [l, r] : c.eqs.equations)
        au.eqs.equations.emplace_back(abstract_blocks(l, letter_of),
                                      abstract_blocks(r, letter_of));
      int fresh_counter = 0;
      std::vector<Term> deduced_letters;
      for (std::size_t s = 0; s < nsteps; ++s) {
        std::vector<Term> know;
        for (const auto& t : c.steps[s].knowledge)
          know.push_back(abstract_blocks(t, letter_of));
        know.insert(know.end(), deduced_letters.begin(), deduced_letters.end());
        for (int g = 0; g < ngroups; ++g) {
          if (slot[g] != static_cast<int>(s)) continue;
          for (const auto& arg : class_args[g]) {
            std::string z = "?arg#" + std::to_string(fresh_counter++);
            au.steps.push_back({know, z});
            au.eqs.equations.emplace_back(Term::var(z), arg);
          }
          deduced_letters.push_back(Term::constant(classes[g].letter));
          know.push_back(Term::constant(classes[g].letter));
        }
        au.steps.push_back({know, c.steps[s].target});
      }
      // restrictions induced through unavoidable block constants
      for (int g = 0; g < ngroups; ++g) {
        std::set<std::string> unavoidable;
        std::set<int> seen;
        std::function<void(int)> gather = [&](int gi) {
          if (!seen.insert(gi).second) return;
          for (const auto& a : class_args[gi])
            for (const auto& cn : a.const_names()) {
              for (int gj = 0; gj < ngroups; ++gj)
                if (classes[gj].letter == cn) gather(gj);
              unavoidable.insert(cn);
            }
        };
        gather(g);
        for (const auto& [x, cn] : c.order.pairs)
          if (unavoidable.count(cn)) au.order.add(x, classes[g].letter);
      }

      Verdict v = solve_au(au, bound);
      if (v.is_unknown()) {
        unknown_seen = true;
        unknown_bound = std::max(unknown_bound, v.bound);
      } else if (v.is_sat()) {
        // ground class arguments and map letters back to block values
        std::vector<std::vector<Term>> ground_args(ngroups);
        for (int g = 0; g < ngroups; ++g)
          for (const auto& a : class_args[g]) ground_args[g].push_back(v.witness.apply(a));
        std::map<std::string, Term> values;
        if (resolve_block_values(classes, ground_args, values)) {
          std::map<Term, Term> letter_values;
          for (const auto& [name, val] : values)
            letter_values[Term::constant(name)] = val;
          Substitution sigma;
          for (const auto& var : c.var_names()) {
            const Term* w = v.witness.find(var);
            Term val = w ? *w : Term::eps();
            // replace class letters inside the word by their block values
            std::vector<Term> ls;
            for (const auto& l : val.letters()) {
              auto it = letter_values.find(l);
              ls.push_back(it == letter_values.end() ? l : it->second);
            }
            sigma.bind(var, Term::from_letters(ls));
          }
          if (verify_solution(c, sigma, SystemTag::FREE)) return Verdict::sat(std::move(sigma));
          rejected_candidate = true;
        } else {
          rejected_candidate = true;
        }
      }

      // next slot placement (mixed radix over {-1, 0, .., nsteps-1})
      int p = ngroups - 1;
      while (p >= 0) {
        if (++slot[p] < static_cast<int>(nsteps)) break;
        slot[p] = -1;
        --p;
      }
      if (p < 0) break;
    }
  }

  if (unknown_seen) return Verdict::unknown(unknown_bound);
  if (rejected_candidate) return Verdict::unknown(bound);
  return Verdict::unsat();
}

}  // namespace symcol
