#include "symcol/unify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symcol/theory.hpp"

namespace symcol {

void OrderingConstraint::add(const std::string& lhs, const std::string& rhs) {
  pairs.emplace_back(lhs, rhs);
}

namespace {

bool is_var_name(const std::string& n) {
  return !n.empty() && (n[0] == '?' || n[0] == '!');
}

std::map<std::string, std::set<std::string>> edge_map(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::set<std::string>> g;
  for (const auto& [a, b] : pairs) g[a].insert(b);
  return g;
}

bool has_cycle(const std::map<std::string, std::set<std::string>>& g) {
  std::map<std::string, int> state;  // 0 unseen, 1 open, 2 done
  std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> stack;
  for (const auto& [start, _] : g) {
    if (state[start]) continue;
    state[start] = 1;
    stack.push_back({start, g.at(start).begin()});
    while (!stack.empty()) {
      auto& [node, it] = stack.back();
      auto git = g.find(node);
      if (git == g.end() || it == git->second.end()) {
        state[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& next = *it++;
      if (state[next] == 1) return true;
      if (state[next] == 0) {
        state[next] = 1;
        auto nit = g.find(next);
        stack.push_back({next, nit == g.end() ? std::set<std::string>::const_iterator{}
                                              : nit->second.begin()});
      }
    }
  }
  return false;
}

}  // namespace

bool OrderingConstraint::is_partial_order() const { return !has_cycle(edge_map(pairs)); }

std::set<std::string> OrderingConstraint::forbidden_for(const std::string& var) const {
  auto g = edge_map(pairs);
  std::set<std::string> forbidden;
  std::set<std::string> seen{var};
  std::vector<std::string> work{var};
  while (!work.empty()) {
    std::string cur = work.back();
    work.pop_back();
    auto it = g.find(cur);
    if (it == g.end()) continue;
    for (const auto& next : it->second) {
      if (!is_var_name(next)) {
        forbidden.insert(next);
      } else if (seen.insert(next).second) {
        work.push_back(next);
      }
    }
  }
  return forbidden;
}

bool OrderingConstraint::allows(const Substitution& s) const {
  for (const auto& [var, value] : s.map) {
    auto forbidden = forbidden_for(var);
    if (forbidden.empty()) continue;
    for (const auto& c : value.const_names())
      if (forbidden.count(c)) return false;
  }
  return true;
}

std::string verdict_name(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Sat: return "sat";
    case Verdict::Kind::Unsat: return "unsat";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

bool satisfies_au(const UnificationSystem& s, const Substitution& sigma) {
  for (const auto& [l, r] : s.equations)
    if (!eq_modulo_au(sigma.apply(l), sigma.apply(r))) return false;
  return true;
}

// ---- Nielsen search ----

namespace {

using Word = std::vector<Term>;  // letters: vars and constants

Word to_word(const Term& t) {
  Word w;
  for (const auto& l : t.letters()) {
    if (!(l.is_var() || l.is_const()))
      throw std::invalid_argument("word unification expects flat words: " + t.str());
    if (l.is_x1_var())
      throw std::invalid_argument("word unification handles ?-variables only: " + l.str());
    w.push_back(l);
  }
  return w;
}

struct Eq {
  Word lhs, rhs;
  std::size_t len() const { return lhs.size() + rhs.size(); }
};

std::string word_key(const Word& w) {
  std::string k;
  for (const auto& l : w) {
    k += l.name();
    k += ' ';
  }
  return k;
}

std::string eqs_key(const std::vector<Eq>& eqs,
                    const std::map<std::string, std::set<std::string>>& forbidden) {
  std::vector<std::string> parts;
  for (const auto& e : eqs) parts.push_back(word_key(e.lhs) + "=" + word_key(e.rhs));
  std::sort(parts.begin(), parts.end());
  std::string k;
  for (auto& p : parts) {
    k += p;
    k += '|';
  }
  // the restriction state steers future pruning, so it is part of the state
  for (const auto& [var, consts] : forbidden) {
    if (consts.empty()) continue;
    k += var;
    k += '{';
    for (const auto& c : consts) {
      k += c;
      k += ' ';
    }
    k += '}';
  }
  return k;
}

struct NielsenSearch {
  int bound;
  bool cut = false;
  std::set<std::string> visited;
  std::set<std::string> original_vars;
  std::optional<Substitution> found;
  const OrderingConstraint* ord = nullptr;

  struct State {
    std::vector<Eq> eqs;
    std::map<std::string, int> consumed;
    std::map<std::string, std::set<std::string>> forbidden;
    std::vector<std::pair<std::string, Word>> bindings;  // var -> image
  };

  static void substitute(Word& w, const std::string& var, const Word& image) {
    Word out;
    for (const auto& l : w) {
      if (l.is_var() && l.name() == var)
        out.insert(out.end(), image.begin(), image.end());
      else
        out.push_back(l);
    }
    w = std::move(out);
  }

  static void apply_binding(State& st, const std::string& var, const Word& image) {
    for (auto& e : st.eqs) {
      substitute(e.lhs, var, image);
      substitute(e.rhs, var, image);
    }
    st.bindings.emplace_back(var, image);
  }

  // strip equal prefixes/suffixes, drop trivial equations, handle empty
  // sides; returns false when the state is contradictory
  static bool simplify(State& st) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < st.eqs.size(); ++i) {
        Eq& e = st.eqs[i];
        while (!e.lhs.empty() && !e.rhs.empty() && e.lhs.front() == e.rhs.front()) {
          e.lhs.erase(e.lhs.begin());
          e.rhs.erase(e.rhs.begin());
        }
        while (!e.lhs.empty() && !e.rhs.empty() && e.lhs.back() == e.rhs.back()) {
          e.lhs.pop_back();
          e.rhs.pop_back();
        }
        if (e.lhs.empty() && e.rhs.empty()) {
          st.eqs.erase(st.eqs.begin() + i);
          --i;
          changed = true;
          continue;
        }
        if (e.lhs.empty() || e.rhs.empty()) {
          const Word side = e.lhs.empty() ? e.rhs : e.lhs;
          for (const auto& l : side)
            if (l.is_const()) return false;
          st.eqs.erase(st.eqs.begin() + i);
          for (const auto& l : side) apply_binding(st, l.name(), {});
          changed = true;
          break;  // equations changed wholesale; restart scan
        }
        // constant clash at either end
        if (e.lhs.front().is_const() && e.rhs.front().is_const()) return false;
        if (e.lhs.back().is_const() && e.rhs.back().is_const()) return false;
      }
    }
    return true;
  }

  Substitution build_witness(const State& st) {
    std::map<std::string, Word> sol;
    for (const auto& v : original_vars) sol[v] = {Term::var(v)};
    for (const auto& [var, image] : st.bindings)
      for (auto& [_, w] : sol) substitute(w, var, image);
    Substitution out;
    for (auto& [v, w] : sol) {
      std::vector<Term> ground;
      for (const auto& l : w)
        if (l.is_const()) ground.push_back(l);  // leftover vars become eps
      out.bind(v, Term::from_letters(ground));
    }
    return out;
  }

  void run(State st) {
    if (found) return;
    if (!simplify(st)) return;
    if (st.eqs.empty()) {
      Substitution w = build_witness(st);
      if (ord->allows(w)) found = std::move(w);
      return;
    }
    std::string key = eqs_key(st.eqs, st.forbidden);
    if (!visited.insert(key).second) return;

    // pick the equation with the smallest combined length, then lexicographic
    std::size_t best = 0;
    std::string best_key;
    for (std::size_t i = 0; i < st.eqs.size(); ++i) {
      std::string k = word_key(st.eqs[i].lhs) + "=" + word_key(st.eqs[i].rhs);
      if (i == 0 || st.eqs[i].len() < st.eqs[best].len() ||
          (st.eqs[i].len() == st.eqs[best].len() && k < best_key)) {
        best = i;
        best_key = k;
      }
    }
    const Eq& e = st.eqs[best];
    const Term& a = e.lhs.front();
    const Term& b = e.rhs.front();

    auto branch_eps = [&](const std::string& var) {
      State next = st;
      apply_binding(next, var, {});
      run(std::move(next));
    };
    auto branch_prepend = [&](const std::string& var, const Term& head) {
      if (head.is_const() && st.forbidden[var].count(head.name())) return;
      auto it = st.consumed.find(var);
      int used = it == st.consumed.end() ? 0 : it->second;
      if (used >= bound) {
        cut = true;
        return;
      }
      State next = st;
      next.consumed[var] = used + 1;
      if (head.is_var()) {
        auto& fb = next.forbidden[head.name()];
        const auto& fa = next.forbidden[var];
        fb.insert(fa.begin(), fa.end());
      }
      apply_binding(next, var, {head, Term::var(var)});
      run(std::move(next));
    };

    if (a.is_var() && b.is_var()) {
      branch_eps(a.name());
      if (found) return;
      branch_eps(b.name());
      if (found) return;
      branch_prepend(a.name(), b);
      if (found) return;
      branch_prepend(b.name(), a);
    } else if (a.is_var()) {
      branch_eps(a.name());
      if (found) return;
      branch_prepend(a.name(), b);
    } else {  // b is a variable (const-const clash handled in simplify)
      branch_eps(b.name());
      if (found) return;
      branch_prepend(b.name(), a);
    }
  }
};

}  // namespace

Verdict solve_au_lcr(const UnificationSystem& s, const OrderingConstraint& ord, int bound) {
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  if (!ord.is_partial_order())
    throw std::invalid_argument("ordering constraint contains a cycle");

  NielsenSearch search;
  search.bound = bound;
  search.ord = &ord;
  NielsenSearch::State init;
  for (const auto& [l, r] : s.equations) {
    Eq e{to_word(l), to_word(r)};
    init.eqs.push_back(std::move(e));
    for (const auto& v : l.var_names()) search.original_vars.insert(v);
    for (const auto& v : r.var_names()) search.original_vars.insert(v);
  }
  for (const auto& v : search.original_vars) init.forbidden[v] = ord.forbidden_for(v);

  search.run(std::move(init));
  if (search.found) {
    if (!satisfies_au(s, *search.found))
      throw std::logic_error("word unifier produced a bad witness");
    return Verdict::sat(std::move(*search.found));
  }
  if (search.cut) return Verdict::unknown(bound);
  return Verdict::unsat();
}

// ---- syntactic unification ----

namespace {

void check_syntactic_operand(const Term& t) {
  if (t.is_cat() || t.is_hash())
    throw std::invalid_argument("syntactic unification expects f/g terms, atoms and variables: " +
                                t.str());
  for (const auto& a : t.args()) check_syntactic_operand(a);
}

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  for (const auto& a : t.args())
    if (occurs(var, a)) return true;
  return false;
}

}  // namespace

std::optional<Substitution> mgu_syntactic(const UnificationSystem& s) {
  std::vector<std::pair<Term, Term>> work = s.equations;
  Substitution sigma;
  while (!work.empty()) {
    auto [l, r] = work.back();
    work.pop_back();
    l = sigma.apply(l);
    r = sigma.apply(r);
    if (l == r) continue;
    if (l.is_var() || r.is_var()) {
      const Term& v = l.is_var() ? l : r;
      const Term& t = l.is_var() ? r : l;
      if (occurs(v.name(), t)) return std::nullopt;
      Substitution single;
      single.bind(v.name(), t);
      sigma = sigma.compose_under(single);
      sigma.bind(v.name(), t);
      continue;
    }
    if (l.kind() != r.kind() || l.args().size() != r.args().size() || l.name() != r.name())
      return std::nullopt;
    for (std::size_t i = 0; i < l.args().size(); ++i)
      work.emplace_back(l.args()[i], r.args()[i]);
  }
  return sigma;
}

Verdict solve_syntactic_lcr(const UnificationSystem& s, const OrderingConstraint& ord) {
  for (const auto& [l, r] : s.equations) {
    check_syntactic_operand(l);
    check_syntactic_operand(r);
  }
  if (!ord.is_partial_order())
    throw std::invalid_argument("ordering constraint contains a cycle");
  auto mgu = mgu_syntactic(s);
  if (!mgu) return Verdict::unsat();

  std::set<std::string> vars;
  for (const auto& [l, r] : s.equations) {
    for (const auto& v : l.var_names()) vars.insert(v);
    for (const auto& v : r.var_names()) vars.insert(v);
  }
  // a restricted constant inside the most general value dooms every instance
  for (const auto& v : vars) {
    Term val = mgu->apply(Term::var(v));
    auto forbidden = ord.forbidden_for(v);
    for (const auto& c : val.const_names())
      if (forbidden.count(c)) return Verdict::unsat();
  }

  // ground the leftover variables with a constant foreign to the system
  std::set<std::string> used;
  for (const auto& [l, r] : s.equations) {
    auto cl = l.const_names(), cr = r.const_names();
    used.insert(cl.begin(), cl.end());
    used.insert(cr.begin(), cr.end());
  }
  std::string fresh = "w0";
  for (int i = 0; used.count(fresh); ++i) fresh = "w" + std::to_string(i);

  Substitution witness;
  for (const auto& v : vars) {
    Term val = mgu->apply(Term::var(v));
    Substitution ground_free;
    for (const auto& fv : val.var_names()) ground_free.bind(fv, Term::constant(fresh));
    witness.bind(v, ground_free.apply(val));
  }
  for (const auto& [l, r] : s.equations)
    if (!(witness.apply(l) == witness.apply(r)))
      throw std::logic_error("syntactic unifier produced a bad witness");
  if (!ord.allows(witness)) return Verdict::unsat();
  return Verdict::sat(std::move(witness));
}

// ---- brute force oracle ----

Verdict brute_force_unify(const UnificationSystem& s, const OrderingConstraint& ord,
                          const std::vector<std::string>& alphabet, int maxlen) {
  std::set<std::string> var_set;
  for (const auto& [l, r] : s.equations) {
    for (const auto& v : l.var_names()) var_set.insert(v);
    for (const auto& v : r.var_names()) var_set.insert(v);
  }
  std::vector<std::string> vars(var_set.begin(), var_set.end());

  // all candidate words ordered by length then letters
  std::vector<Term> candidates{Term::eps()};
  std::vector<std::vector<int>> idx{{}};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<int> digits(len, 0);
    while (true) {
      std::vector<Term> ls;
      for (int d : digits) ls.push_back(Term::constant(alphabet[d]));
      candidates.push_back(Term::from_letters(ls));
      int p = len - 1;
      while (p >= 0 && ++digits[p] == static_cast<int>(alphabet.size())) digits[p--] = 0;
      if (p < 0) break;
    }
  }

  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i], candidates[pick[i]]);
    if (satisfies_au(s, sigma) && ord.allows(sigma)) return Verdict::sat(std::move(sigma));
    if (vars.empty()) break;
    std::size_t p = vars.size() - 1;
    while (true) {
      if (++pick[p] < candidates.size()) break;
      pick[p] = 0;
      if (p == 0) return Verdict::unsat();
      --p;
    }
  }
  return vars.empty() ? Verdict::unsat() : Verdict::unsat();
}

}  // namespace symcol
