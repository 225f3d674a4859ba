#include "symcol/hashred.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "symcol/theory.hpp"

namespace symcol {

namespace {

void check_precondition(const ConstraintSystem& c) {
  auto rep = check_deterministic(c);
  if (!rep.ok)
    throw std::invalid_argument("constraint system is not deterministic: " +
                                (rep.violations.empty() ? "" : rep.violations.front()));
  for (const auto& t : c.all_terms())
    if (t.is_block())
      throw std::invalid_argument("reduction rejects f/g-rooted terms: " + t.str());
  for (const auto& v : c.var_names())
    if (!v.empty() && v[0] == '!')
      throw std::invalid_argument("hash-sorted variables are internal; use ?-variables: " + v);
}

// replace h-rooted class members by their value letters, everywhere
Term abstract_members(const Term& t, const std::map<Term, Term>& letter_of) {
  if (t.is_hash()) {
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
      for (const auto& a : t.args()) parts.push_back(abstract_members(a, letter_of));
      return Term::cat(std::move(parts));
    }
    case Kind::Hash:
      return Term::hash(abstract_members(t.args()[0], letter_of));
    case Kind::FApp:
    case Kind::GApp: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(abstract_members(a, letter_of));
      return t.kind() == Kind::FApp ? Term::fapp(std::move(args)) : Term::gapp(std::move(args));
    }
  }
  return t;
}

std::vector<std::vector<int>> partitions_rgs(int n) {
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

std::string system_fingerprint(const ConstraintSystem& c) {
  std::ostringstream os;
  for (const auto& s : c.steps) {
    os << s.target << "<|";
    std::vector<std::string> know;
    for (const auto& t : s.knowledge) know.push_back(t.str());
    std::sort(know.begin(), know.end());
    for (const auto& k : know) os << k << ",";
    os << ";";
  }
  std::vector<std::string> eqs;
  for (const auto& [l, r] : c.eqs.equations) eqs.push_back(l.str() + "=" + r.str());
  std::sort(eqs.begin(), eqs.end());
  for (const auto& e : eqs) os << e << ";";
  auto pairs = c.order.pairs;
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [a, b] : pairs) os << a << "<" << b << ";";
  return os.str();
}

}  // namespace

std::vector<Term> hash_subterm_values(const ConstraintSystem& c) {
  ModeTable table = ModeTable::standard();
  std::set<Term> sub = subterm_values(c.all_terms(), table);
  std::vector<Term> out;
  for (const auto& t : sub)
    if (t.is_hash()) out.push_back(t);
  return out;
}

bool class_count_admissible(int k, const ConstraintSystem& c) {
  int slots = static_cast<int>(hash_subterm_values(c).size()) +
              static_cast<int>(c.var_names().size());
  return k <= slots;
}

namespace {

struct BranchBuilder {
  const ConstraintSystem* sys;
  std::vector<Term> members;  // all h-rooted subterm values

  // builds the reduced system for a fully chosen branch; returns nullopt for
  // internally contradictory choices
  std::optional<ReductionBranch> build(const std::vector<std::vector<int>>& classes,
                                       const std::vector<int>& slots,
                                       const std::vector<int>& structures) const {
    const int k = static_cast<int>(classes.size());
    ReductionBranch br;
    br.k = k;
    br.slots = slots;
    br.structures = structures;

    std::map<Term, Term> letter_of;
    for (int g = 0; g < k; ++g) {
      br.preimage_vars.push_back("?c#" + std::to_string(g));
      br.value_consts.push_back("hv#" + std::to_string(g));
      br.classes.emplace_back();
      for (int mi : classes[g]) {
        br.classes.back().push_back(members[mi]);
        letter_of[members[mi]] = Term::constant(br.value_consts.back());
      }
    }

    ConstraintSystem red;
    red.order = sys->order;

    // class structure equations; the hash argument of each member is
    // abstracted through the other classes
    for (int g = 0; g < k; ++g) {
      const auto& cls = br.classes[g];
      Term cvar = Term::var(br.preimage_vars[g]);
      int structure = structures[g];
      std::vector<Term> args_hat;
      for (const auto& m : cls) args_hat.push_back(abstract_members(m.args()[0], letter_of));
      if (structure == 0) {
        for (const auto& a : args_hat) red.eqs.equations.emplace_back(a, cvar);
      } else {
        // structure encodes: bit 0 = pre-image side (0: f, 1: g), bits 1.. =
        // member sides (0: f, 1: g)
        int code = structure - 1;
        Term x1 = Term::var("?x1#" + std::to_string(g));
        Term x2 = Term::var("?x2#" + std::to_string(g));
        Term y1 = Term::var("?y1#" + std::to_string(g));
        Term y2 = Term::var("?y2#" + std::to_string(g));
        std::vector<Term> tuple{x1, x2, y1, y2};
        Term f_side = Term::cat({x1, Term::fapp(tuple), x2});
        Term g_side = Term::cat({y1, Term::gapp(tuple), y2});
        red.eqs.equations.emplace_back(cvar, (code & 1) ? g_side : f_side);
        for (std::size_t m = 0; m < cls.size(); ++m) {
          bool on_g = (code >> (m + 1)) & 1;
          red.eqs.equations.emplace_back(args_hat[m], on_g ? g_side : f_side);
        }
      }
    }

    // original equations, abstracted everywhere (root hash terms denote the
    // class value, whose content lives in the structure equations)
    for (const auto& [l, r] : sys->eqs.equations)
      red.eqs.equations.emplace_back(abstract_members(l, letter_of),
                                     abstract_members(r, letter_of));

    // constraints with deduced classes inserted before their slot
    std::vector<Term> deduced;
    for (std::size_t s = 0; s < sys->steps.size(); ++s) {
      std::vector<Term> know;
      for (const auto& t : sys->steps[s].knowledge)
        know.push_back(abstract_members(t, letter_of));
      know.insert(know.end(), deduced.begin(), deduced.end());
      for (int g = 0; g < k; ++g) {
        if (slots[g] != static_cast<int>(s)) continue;
        red.steps.push_back({know, br.preimage_vars[g]});
        deduced.push_back(Term::constant(br.value_consts[g]));
        know.push_back(Term::constant(br.value_consts[g]));
      }
      red.steps.push_back({know, sys->steps[s].target});
    }
    // classes deduced after every constraint make no difference; slots are
    // limited to existing constraints

    br.reduced = std::move(red);
    br.fingerprint = system_fingerprint(br.reduced);
    return br;
  }
};

}  // namespace

bool for_each_reduction(const ConstraintSystem& c, const ReductionLimits& limits,
                        const std::function<bool(const ReductionBranch&)>& fn) {
  check_precondition(c);
  BranchBuilder builder{&c, hash_subterm_values(c)};
  const int n_members = static_cast<int>(builder.members.size());
  const int nsteps = static_cast<int>(c.steps.size());
  int max_k = limits.max_k < 0 ? n_members : std::min(limits.max_k, n_members);

  long emitted = 0;
  std::set<std::string> seen;

  auto all_partitions = partitions_rgs(n_members);
  for (int k = 0; k <= max_k; ++k) {
    if (!class_count_admissible(k, c) && k > 0) continue;
    for (const auto& rgs : all_partitions) {
      int ngroups = n_members == 0 ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
      if (ngroups != k) continue;
      std::vector<std::vector<int>> classes(k);
      for (int i = 0; i < n_members; ++i) classes[rgs[i]].push_back(i);

      // a class value occurring inside one of its own pre-images (directly or
      // through a cycle of classes) would be infinite; skip such partitions
      {
        std::vector<std::set<int>> depends(k);
        for (int g = 0; g < k; ++g)
          for (int mi : classes[g])
            for (int other = 0; other < n_members; ++other)
              if (other != mi &&
                  is_syntactic_subterm(builder.members[other], builder.members[mi].args()[0]))
                depends[g].insert(rgs[other]);
        std::vector<int> color(k, 0);
        std::function<bool(int)> cyclic = [&](int g) {
          if (color[g] == 1) return true;
          if (color[g] == 2) return false;
          color[g] = 1;
          for (int d : depends[g])
            if (cyclic(d)) return true;
          color[g] = 2;
          return false;
        };
        bool bad = false;
        for (int g = 0; g < k && !bad; ++g) bad = cyclic(g);
        if (bad) continue;
      }

      // deduction slots: -1 or a position before one of the constraints
      std::vector<int> slots(k, -1);
      while (true) {
        // structure vectors: 0 (shared pre-image) plus collision splits
        std::vector<int> structures(k, 0);
        std::vector<int> structure_max(k);
        for (int g = 0; g < k; ++g) {
          int r = static_cast<int>(classes[g].size());
          structure_max[g] = limits.collisions ? (1 << (r + 1)) : 1;
        }
        while (true) {
          // splits with everyone on the pre-image's side are subsumed by the
          // shared case
          bool degenerate = false;
          for (int g = 0; g < k; ++g) {
            if (structures[g] == 0) continue;
            int code = structures[g] - 1;
            bool c_side = code & 1;
            bool all_same = true;
            for (std::size_t m = 0; m < classes[g].size(); ++m)
              all_same = all_same && (((code >> (m + 1)) & 1) == static_cast<int>(c_side));
            if (all_same) degenerate = true;
          }
          std::optional<ReductionBranch> br;
          if (!degenerate) br = builder.build(classes, slots, structures);
          if (br && seen.insert(br->fingerprint).second) {
            ++emitted;
            if (!fn(*br)) return false;
            if (emitted >= limits.max_branches) return false;
          }
          int p = k - 1;
          while (p >= 0) {
            if (++structures[p] < structure_max[p]) break;
            structures[p] = 0;
            --p;
          }
          if (p < 0) break;
        }
        int p = k - 1;
        while (p >= 0) {
          if (++slots[p] < nsteps) break;
          slots[p] = -1;
          --p;
        }
        if (p < 0) break;
      }
      if (k == 0) break;  // single empty partition
    }
  }
  return true;
}

std::vector<ReductionBranch> enumerate_reductions(const ConstraintSystem& c,
                                                  const ReductionLimits& limits) {
  std::vector<ReductionBranch> out;
  for_each_reduction(c, limits, [&](const ReductionBranch& b) {
    out.push_back(b);
    return true;
  });
  return out;
}

namespace {

// expand hash-value letters back into hash terms; false on cyclic classes
bool expand_values(const ReductionBranch& br, const Substitution& free_sigma,
                   std::map<std::string, Term>& values) {
  std::map<std::string, int> state;
  std::function<std::optional<Term>(const Term&)> expand;
  std::function<bool(std::size_t)> build = [&](std::size_t g) -> bool {
    const std::string& name = br.value_consts[g];
    if (state[name] == 2) return true;
    if (state[name] == 1) return false;
    state[name] = 1;
    const Term* pre = free_sigma.find(br.preimage_vars[g]);
    Term arg = pre ? *pre : Term::eps();
    auto e = expand(arg);
    if (!e) return false;
    values[name] = Term::hash(*e);
    state[name] = 2;
    return true;
  };
  expand = [&](const Term& t) -> std::optional<Term> {
    if (t.is_const()) {
      for (std::size_t g = 0; g < br.value_consts.size(); ++g)
        if (br.value_consts[g] == t.name()) {
          if (!build(g)) return std::nullopt;
          return values.at(t.name());
        }
      return t;
    }
    if (t.is_var() || t.is_eps()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) {
      auto e = expand(a);
      if (!e) return std::nullopt;
      args.push_back(*e);
    }
    switch (t.kind()) {
      case Kind::Cat: return Term::cat(std::move(args));
      case Kind::Hash: return Term::hash(args[0]);
      case Kind::FApp: return Term::fapp(std::move(args));
      case Kind::GApp: return Term::gapp(std::move(args));
      default: return t;
    }
  };
  for (std::size_t g = 0; g < br.value_consts.size(); ++g)
    if (!build(g)) return false;
  return true;
}

}  // namespace

HSolveResult solve_h(const ConstraintSystem& c, const ReductionLimits& limits, int bound) {
  HSolveResult res;
  bool unknown_seen = false, rejected = false;
  int unknown_bound = 0;

  bool complete = for_each_reduction(c, limits, [&](const ReductionBranch& br) {
    ++res.branches_tried;
    Verdict v = solve_free(br.reduced, bound);
    if (v.is_unknown()) {
      unknown_seen = true;
      unknown_bound = std::max(unknown_bound, v.bound);
      return true;
    }
    if (!v.is_sat()) return true;

    std::map<std::string, Term> values;
    if (!expand_values(br, v.witness, values)) {
      rejected = true;
      return true;
    }
    std::function<Term(const Term&)> expand = [&](const Term& t) -> Term {
      if (t.is_const()) {
        auto it = values.find(t.name());
        return it == values.end() ? t : it->second;
      }
      if (t.is_var() || t.is_eps()) return t;
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(expand(a));
      switch (t.kind()) {
        case Kind::Cat: return Term::cat(std::move(args));
        case Kind::Hash: return Term::hash(args[0]);
        case Kind::FApp: return Term::fapp(std::move(args));
        case Kind::GApp: return Term::gapp(std::move(args));
        default: return t;
      }
    };
    Substitution sigma;
    for (const auto& var : c.var_names()) {
      const Term* w = v.witness.find(var);
      sigma.bind(var, expand(w ? *w : Term::eps()));
    }
    if (!verify_solution(c, sigma, SystemTag::H)) {
      rejected = true;
      return true;
    }
    res.verdict = Verdict::sat(std::move(sigma));
    res.branch = br;
    res.trace = solution_witnesses(c, res.verdict.witness, SystemTag::H);
    return false;  // stop the stream
  });

  if (res.verdict.is_sat()) {
    res.exhausted = false;
    return res;
  }
  res.exhausted = complete;
  if (!complete || unknown_seen || rejected) {
    res.verdict = Verdict::unknown(unknown_seen ? unknown_bound : bound);
  } else {
    res.verdict = Verdict::unsat();
  }
  return res;
}

}  // namespace symcol
