#include "symcol/unify.hpp"

#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "symcol/theory.hpp"

using namespace symcol;
using testgen::Rng;

namespace {

Term T(const std::string& s) { return parse_term(s); }

UnificationSystem sys(std::initializer_list<std::pair<const char*, const char*>> eqs) {
  UnificationSystem s;
  for (const auto& [l, r] : eqs) s.equations.emplace_back(T(l), T(r));
  return s;
}

std::string sol_key(const Substitution& s, const std::set<std::string>& vars) {
  std::ostringstream os;
  for (const auto& v : vars) {
    const Term* t = s.find(v);
    os << v << "=" << (t ? t->str() : "eps") << ";";
  }
  return os.str();
}

// all oracle solutions (not just the first), serialized over `vars`
std::set<std::string> all_solutions(const UnificationSystem& s, const OrderingConstraint& ord,
                                    const std::vector<std::string>& alpha, int maxlen,
                                    const std::set<std::string>& vars) {
  std::vector<std::string> vlist(vars.begin(), vars.end());
  std::vector<Term> candidates{Term::eps()};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<int> digits(len, 0);
    while (true) {
      std::vector<Term> ls;
      for (int d : digits) ls.push_back(Term::constant(alpha[d]));
      candidates.push_back(Term::from_letters(ls));
      int p = len - 1;
      while (p >= 0 && ++digits[p] == static_cast<int>(alpha.size())) digits[p--] = 0;
      if (p < 0) break;
    }
  }
  std::set<std::string> out;
  std::vector<std::size_t> pick(vlist.size(), 0);
  while (true) {
    Substitution sigma;
    for (std::size_t i = 0; i < vlist.size(); ++i) sigma.bind(vlist[i], candidates[pick[i]]);
    if (satisfies_au(s, sigma) && ord.allows(sigma)) out.insert(sol_key(sigma, vars));
    if (vlist.empty()) break;
    std::size_t p = vlist.size() - 1;
    while (true) {
      if (++pick[p] < candidates.size()) break;
      pick[p] = 0;
      if (p == 0) return out;
      --p;
    }
  }
  return out;
}

std::set<std::string> system_vars(const UnificationSystem& s) {
  std::set<std::string> vars;
  for (const auto& [l, r] : s.equations) {
    for (const auto& v : l.var_names()) vars.insert(v);
    for (const auto& v : r.var_names()) vars.insert(v);
  }
  return vars;
}

Term random_pattern(Rng& rng, const std::vector<std::string>& alpha,
                    const std::vector<std::string>& vars, int maxlen) {
  int len = rng.below(maxlen + 1);
  std::vector<Term> ls;
  for (int i = 0; i < len; ++i) {
    if (rng.chance(40))
      ls.push_back(Term::var(vars[rng.below(static_cast<int>(vars.size()))]));
    else
      ls.push_back(Term::constant(alpha[rng.below(static_cast<int>(alpha.size()))]));
  }
  return Term::from_letters(ls);
}

}  // namespace

TEST_CASE("ordered word unification basics") {
  OrderingConstraint none;

  OrderingConstraint restr;
  restr.add("?x", "a");
  CHECK(solve_au_lcr(sys({{"?x", "a"}}), restr, 8).is_unsat());

  auto v1 = solve_au_lcr(sys({{"?x . ?y", "a . b"}}), none, 8);
  REQUIRE(v1.is_sat());
  CHECK(satisfies_au(sys({{"?x . ?y", "a . b"}}), v1.witness));

  auto v2 = solve_au_lcr(sys({{"?x . a", "a . ?x"}}), none, 8);
  REQUIRE(v2.is_sat());
  CHECK(satisfies_au(sys({{"?x . a", "a . ?x"}}), v2.witness));

  CHECK(solve_au_lcr(sys({{"a", "b"}}), none, 8).is_unsat());
  CHECK(solve_au_lcr(sys({{"?x", "?x"}}), none, 8).is_sat());
  CHECK(solve_au_lcr(sys({{"?x . ?x", "a"}}), none, 8).is_unsat());
  CHECK(solve_au_lcr(sys({{"eps", "eps"}}), none, 8).is_sat());

  OrderingConstraint cyc;
  cyc.add("?x", "a");
  cyc.add("a", "?x");
  CHECK_THROWS_AS(solve_au_lcr(sys({{"?x", "a"}}), cyc, 8), std::invalid_argument);

  CHECK_THROWS_AS(solve_au_lcr(sys({{"!h1", "a"}}), none, 8), std::invalid_argument);
}

TEST_CASE("restrictions respect transitive var chains") {
  // ?x < ?y < a forbids a inside ?x
  OrderingConstraint ord;
  ord.add("?x", "?y");
  ord.add("?y", "a");
  CHECK(ord.forbidden_for("?x") == std::set<std::string>{"a"});
  CHECK(solve_au_lcr(sys({{"?x", "a"}}), ord, 8).is_unsat());
  auto v = solve_au_lcr(sys({{"?x", "b"}}), ord, 8);
  CHECK(v.is_sat());
}

TEST_CASE("syntactic unification with restrictions") {
  OrderingConstraint none;
  auto v1 = solve_syntactic_lcr(sys({{"f(?x,a,b,c)", "f(d,a,b,c)"}}), none);
  REQUIRE(v1.is_sat());
  CHECK(*v1.witness.find("?x") == T("d"));

  CHECK(solve_syntactic_lcr(sys({{"f(a,a,a,a)", "g(a,a,a,a)"}}), none).is_unsat());
  CHECK(solve_syntactic_lcr(sys({{"?x", "f(?x,a,a,a)"}}), none).is_unsat());

  OrderingConstraint restr;
  restr.add("?x", "d");
  CHECK(solve_syntactic_lcr(sys({{"f(?x,a,b,c)", "f(d,a,b,c)"}}), restr).is_unsat());

  // free variables are grounded with a fresh constant, dodging restrictions
  OrderingConstraint avoid_all;
  avoid_all.add("?x", "a");
  auto v2 = solve_syntactic_lcr(sys({{"f(?x,a,a,a)", "f(?x,a,a,a)"}}), avoid_all);
  CHECK(v2.is_sat());

  CHECK_THROWS_AS(solve_syntactic_lcr(sys({{"?x . a", "a"}}), none), std::invalid_argument);
}

TEST_CASE("brute force oracle basics") {
  OrderingConstraint none;
  auto alpha = testgen::small_alphabet(2);
  std::vector<std::string> names(alpha.begin(), alpha.end());

  CHECK(brute_force_unify(sys({{"?x", "?x"}}), none, names, 3).is_sat());
  CHECK(brute_force_unify(sys({{"?x . ?x", "a"}}), none, names, 3).is_unsat());
  auto v = brute_force_unify(sys({{"?x . ?y", "a . b"}}), none, names, 2);
  REQUIRE(v.is_sat());
  CHECK(satisfies_au(sys({{"?x . ?y", "a . b"}}), v.witness));
}

TEST_CASE("word solver agrees with the brute force oracle") {
  Rng rng(79);
  auto alpha = testgen::small_alphabet(3);
  std::vector<std::string> vars{"?x", "?y", "?z"};
  int unknowns = 0, sats = 0, unsats = 0;
  const int total = 350;
  for (int i = 0; i < total; ++i) {
    UnificationSystem s;
    int ne = 1 + rng.below(2);
    for (int k = 0; k < ne; ++k)
      s.equations.emplace_back(random_pattern(rng, alpha, vars, 3),
                               random_pattern(rng, alpha, vars, 3));
    OrderingConstraint ord;
    if (rng.chance(35)) ord.add(vars[rng.below(3)], alpha[rng.below(3)]);

    Verdict mine = solve_au_lcr(s, ord, 8);
    Verdict oracle = brute_force_unify(s, ord, alpha, 3);

    if (mine.is_sat()) {
      ++sats;
      CHECK(satisfies_au(s, mine.witness));
      CHECK(ord.allows(mine.witness));
    } else if (mine.is_unsat()) {
      ++unsats;
      CHECK(!oracle.is_sat());
    } else {
      ++unknowns;
    }
    if (oracle.is_sat()) CHECK(!mine.is_unsat());
  }
  CHECK(sats > 50);
  CHECK(unsats > 50);
  CHECK(unknowns * 5 < total);  // unknown rate below 20%
}

TEST_CASE("adding restrictions never turns unsat into sat") {
  Rng rng(83);
  auto alpha = testgen::small_alphabet(3);
  std::vector<std::string> vars{"?x", "?y"};
  for (int i = 0; i < 150; ++i) {
    UnificationSystem s;
    s.equations.emplace_back(random_pattern(rng, alpha, vars, 3),
                             random_pattern(rng, alpha, vars, 3));
    OrderingConstraint none;
    OrderingConstraint more;
    more.add(vars[rng.below(2)], alpha[rng.below(3)]);
    Verdict base = solve_au_lcr(s, none, 8);
    Verdict restricted = solve_au_lcr(s, more, 8);
    if (base.is_unsat()) CHECK(!restricted.is_sat());
    if (restricted.is_sat()) CHECK(base.is_sat());
  }
}

TEST_CASE("nielsen branches preserve the solution set") {
  Rng rng(89);
  auto alpha = testgen::small_alphabet(2);
  std::vector<std::string> vars{"?x", "?y"};
  int exercised = 0;
  for (int i = 0; i < 60; ++i) {
    // leading pair shaped as: variable head against constant head
    UnificationSystem s;
    Term lhs = Term::cat({Term::var(vars[rng.below(2)]), random_pattern(rng, alpha, vars, 2)});
    Term rhs = Term::cat({T(alpha[rng.below(static_cast<int>(alpha.size()))]),
                          random_pattern(rng, alpha, vars, 2)});
    s.equations.emplace_back(lhs, rhs);
    auto vs = system_vars(s);
    const std::string x = lhs.letters()[0].name();
    const Term c = rhs.letters()[0];
    OrderingConstraint none;

    Substitution beps;
    beps.bind(x, Term::eps());
    UnificationSystem s_eps;
    for (const auto& [a, b] : s.equations)
      s_eps.equations.emplace_back(beps.apply(a), beps.apply(b));

    Substitution bpre;
    bpre.bind(x, Term::cat({c, Term::var(x)}));
    UnificationSystem s_pre;
    for (const auto& [a, b] : s.equations)
      s_pre.equations.emplace_back(bpre.apply(a), bpre.apply(b));

    // forward: every bounded solution factors through one of the two branches
    std::vector<std::string> vlist(vs.begin(), vs.end());
    std::vector<Term> candidates{Term::eps()};
    for (const auto& ca : alpha) candidates.push_back(T(ca));
    for (const auto& ca : alpha)
      for (const auto& cb : alpha) candidates.push_back(Term::cat({T(ca), T(cb)}));
    std::vector<std::size_t> pick(vlist.size(), 0);
    bool done = vlist.empty();
    while (!done) {
      Substitution sigma;
      for (std::size_t vi = 0; vi < vlist.size(); ++vi) sigma.bind(vlist[vi], candidates[pick[vi]]);

      // forward: a solution of s factors through the branch matching x's head
      if (satisfies_au(s, sigma)) {
        Term xv = *sigma.find(x);
        auto xls = xv.letters();
        if (xls.empty()) {
          CHECK(satisfies_au(s_eps, sigma));
        } else if (xls[0] == c) {
          Substitution tail = sigma;
          tail.bind(x, Term::cat(std::vector<Term>(xls.begin() + 1, xls.end())));
          CHECK(satisfies_au(s_pre, tail));
        } else {
          CHECK(false);  // head mismatch cannot solve the leading equation
        }
      }
      // backward: branch solutions map back to solutions of s
      if (satisfies_au(s_eps, sigma)) {
        Substitution back = sigma;
        back.bind(x, Term::eps());
        CHECK(satisfies_au(s, back));
      }
      if (satisfies_au(s_pre, sigma)) {
        Substitution back = sigma;
        back.bind(x, Term::cat({c, *sigma.find(x)}));
        CHECK(satisfies_au(s, back));
      }

      std::size_t p = vlist.size() - 1;
      while (true) {
        if (++pick[p] < candidates.size()) break;
        pick[p] = 0;
        if (p == 0) { done = true; break; }
        --p;
      }
    }
    ++exercised;
  }
  CHECK(exercised > 20);
}
