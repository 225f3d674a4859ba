#include "symcol/theory.hpp"

#include <vector>

#include "doctest.h"
#include "generators.hpp"

using namespace symcol;
using testgen::Rng;

namespace {

Term T(const std::string& s) { return parse_term(s); }

// Independent oracle: exhaustive one-step collision rewriting. Matches the
// axiom instance structurally at every hash position and closes under a
// bounded number of steps.
void one_step_rewrites(const Term& t, std::set<Term>& out);

Term rebuild_with(const Term& t, std::size_t arg_idx, const Term& replacement) {
  std::vector<Term> args = t.args();
  args[arg_idx] = replacement;
  switch (t.kind()) {
    case Kind::Cat: return Term::cat(std::move(args));
    case Kind::Hash: return Term::hash(args[0]);
    case Kind::FApp: return Term::fapp(std::move(args));
    case Kind::GApp: return Term::gapp(std::move(args));
    default: return t;
  }
}

std::vector<Term> top_level_partners(const Term& m) {
  std::vector<Term> out;
  auto ls = m.letters();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const Term& block = ls[i];
    if (!block.is_block() || block.args().size() != 4) continue;
    Term prefix = Term::cat(std::vector<Term>(ls.begin(), ls.begin() + i));
    Term suffix = Term::cat(std::vector<Term>(ls.begin() + i + 1, ls.end()));
    const auto& a = block.args();
    if (block.kind() == Kind::FApp && prefix == a[0] && suffix == a[1])
      out.push_back(Term::cat({a[2], Term::gapp(a), a[3]}));
    if (block.kind() == Kind::GApp && prefix == a[2] && suffix == a[3])
      out.push_back(Term::cat({a[0], Term::fapp(a), a[1]}));
  }
  return out;
}

void one_step_rewrites(const Term& t, std::set<Term>& out) {
  if (t.is_hash())
    for (const Term& p : top_level_partners(t.args()[0])) out.insert(Term::hash(p));
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    std::set<Term> inner;
    one_step_rewrites(t.args()[i], inner);
    for (const Term& r : inner) out.insert(rebuild_with(t, i, r));
  }
}

bool oracle_eq_h(const Term& a, const Term& b, int depth) {
  std::set<Term> reach{a};
  std::vector<Term> frontier{a};
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Term> next;
    for (const Term& t : frontier) {
      std::set<Term> step;
      one_step_rewrites(t, step);
      for (const Term& r : step)
        if (reach.insert(r).second) next.push_back(r);
    }
    frontier = std::move(next);
  }
  return reach.count(b) != 0;
}

Term collision_f_side(const Term& t1, const Term& t2, const Term& t3, const Term& t4) {
  return Term::cat({t1, Term::fapp({t1, t2, t3, t4}), t2});
}

Term collision_g_side(const Term& t1, const Term& t2, const Term& t3, const Term& t4) {
  return Term::cat({t3, Term::gapp({t1, t2, t3, t4}), t4});
}

}  // namespace

TEST_CASE("normalize flattens and is idempotent") {
  CHECK(normalize(T("(a . eps) . (b . c)")) == T("a . b . c"));
  CHECK(normalize(T("h(eps)")) == T("h(eps)"));
  Rng rng(23);
  auto alpha = testgen::small_alphabet(3);
  for (int i = 0; i < 200; ++i) {
    Term t = testgen::random_term(rng, alpha, 4);
    CHECK(normalize(t) == t);
    CHECK(normalize(normalize(t)) == normalize(t));
  }
}

TEST_CASE("au equality") {
  CHECK(eq_modulo_au(T("a . (b . c)"), T("(a . b) . c")));
  CHECK(eq_modulo_au(T("a . eps"), T("a")));
  CHECK(!eq_modulo_au(T("a . b"), T("b . a")));
}

TEST_CASE("au equality is a congruence on random terms") {
  Rng rng(29);
  auto alpha = testgen::small_alphabet(3);
  for (int i = 0; i < 200; ++i) {
    Term a = testgen::random_term(rng, alpha, 3);
    Term b = testgen::random_term(rng, alpha, 3);
    CHECK(eq_modulo_au(a, a));
    if (eq_modulo_au(a, b)) {
      CHECK(eq_modulo_au(b, a));
      CHECK(eq_modulo_au(Term::hash(a), Term::hash(b)));
      CHECK(eq_modulo_au(Term::cat({a, T("a")}), Term::cat({b, T("a")})));
      CHECK(eq_modulo_au(Term::fapp({a, a, b, b}), Term::fapp({b, b, a, a})));
    }
  }
}

TEST_CASE("hash equality recognizes the collision pair") {
  CHECK(eq_modulo_h(T("h(a . f(a,b,c,d) . b)"), T("h(c . g(a,b,c,d) . d)")));
  CHECK(eq_modulo_h(T("h(a)"), T("h(a)")));
  CHECK(!eq_modulo_h(T("h(a . f(a,b,c,d) . b)"), T("h(c . g(a,b,c,d) . c)")));
  CHECK(!eq_modulo_h(T("h(a)"), T("h(b)")));
  CHECK_THROWS_AS(eq_modulo_h(T("h(?x)"), T("h(a)")), std::invalid_argument);
}

TEST_CASE("hash equality nests through congruence") {
  Term inner_f = T("h(a . f(a,b,c,d) . b)");
  Term inner_g = T("h(c . g(a,b,c,d) . d)");
  CHECK(eq_modulo_h(Term::cat({T("e"), inner_f}), Term::cat({T("e"), inner_g})));
  CHECK(eq_modulo_h(Term::hash(Term::cat({inner_f, T("a")})),
                    Term::hash(Term::cat({inner_g, T("a")}))));
  // collision whose flank is only equal modulo a nested collision
  Term m_f = Term::cat({inner_f, Term::fapp({inner_f, Term::eps(), T("b"), T("c")})});
  Term m_g = Term::cat({T("b"), Term::gapp({inner_f, Term::eps(), T("b"), T("c")}), T("c")});
  CHECK(eq_modulo_h(Term::hash(m_f), Term::hash(m_g)));
  Term m_f2 = Term::cat({inner_g, Term::fapp({inner_f, Term::eps(), T("b"), T("c")})});
  CHECK(eq_modulo_h(Term::hash(m_f2), Term::hash(m_g)));
}

TEST_CASE("hash equality agrees with the one-step rewriting oracle") {
  Rng rng(31);
  auto alpha = testgen::small_alphabet(4);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    Term t1 = testgen::random_word(rng, alpha, 2);
    Term t2 = testgen::random_word(rng, alpha, 2);
    Term t3 = testgen::random_word(rng, alpha, 2);
    Term t4 = testgen::random_word(rng, alpha, 2);
    Term fs = collision_f_side(t1, t2, t3, t4);
    Term gs = collision_g_side(t1, t2, t3, t4);

    Term a = Term::hash(fs), b = Term::hash(gs);
    CHECK(eq_modulo_h(a, b) == oracle_eq_h(a, b, 3));

    // perturbations: random pairs drawn from the same material
    Term c = Term::hash(testgen::random_word(rng, alpha, 3));
    CHECK(eq_modulo_h(a, c) == oracle_eq_h(a, c, 3));
    CHECK(eq_modulo_h(b, c) == oracle_eq_h(b, c, 3));

    // context embedding
    Term ctx_a = Term::cat({T("a"), a});
    Term ctx_b = Term::cat({T("a"), b});
    CHECK(eq_modulo_h(ctx_a, ctx_b) == oracle_eq_h(ctx_a, ctx_b, 3));
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("hash equality on h-free terms is au equality") {
  Rng rng(37);
  auto alpha = testgen::small_alphabet(3);
  for (int i = 0; i < 300; ++i) {
    Term a = testgen::random_term(rng, alpha, 3, /*allow_hash=*/false);
    Term b = testgen::random_term(rng, alpha, 3, /*allow_hash=*/false);
    CHECK(eq_modulo_h(a, b) == eq_modulo_au(a, b));
  }
}

TEST_CASE("sig is preserved by normalization") {
  Rng rng(41);
  auto alpha = testgen::small_alphabet(3);
  ModeTable m = ModeTable::standard();
  for (int i = 0; i < 200; ++i) {
    Term t = Term::hash(testgen::random_term(rng, alpha, 3));
    CHECK(sig_of(t, m) == 1);
    CHECK(sig_of(normalize(t), m) == 1);
  }
}

TEST_CASE("subterm values survive normalization") {
  Rng rng(43);
  auto alpha = testgen::small_alphabet(3);
  ModeTable m = ModeTable::standard();
  for (int i = 0; i < 200; ++i) {
    Term t = testgen::random_term(rng, alpha, 4);
    auto sub = subterm_values(t, m);
    sub.erase(t);
    sub.erase(Term::eps());
    auto nsub = subterm_values(normalize(t), m);
    for (const auto& u : sub) CHECK(nsub.count(u) == 1);
  }
}

TEST_CASE("collision classes have at most two word shapes") {
  Rng rng(47);
  auto alpha = testgen::small_alphabet(3);
  for (int i = 0; i < 150; ++i) {
    Term t1 = testgen::random_word(rng, alpha, 2);
    Term t2 = testgen::random_word(rng, alpha, 2);
    Term t3 = testgen::random_word(rng, alpha, 2);
    Term t4 = testgen::random_word(rng, alpha, 2);
    Term h = Term::hash(collision_f_side(t1, t2, t3, t4));
    auto cls = eh_variants(h);
    // group the class members by au equality of the hash argument
    std::set<Term> shapes;
    for (const auto& v : cls) shapes.insert(normalize(v.args()[0]));
    CHECK(shapes.size() <= 2);
    // no three pairwise distinct, pairwise colliding words
    std::vector<Term> ws(shapes.begin(), shapes.end());
    for (std::size_t x = 0; x < ws.size(); ++x)
      for (std::size_t y = x + 1; y < ws.size(); ++y)
        CHECK(eq_modulo_h(Term::hash(ws[x]), Term::hash(ws[y])));
  }
}

TEST_CASE("eh_variants lists exactly the collision pair") {
  Term h = T("h(a . f(a,b,c,d) . b)");
  auto cls = eh_variants(h);
  CHECK(cls == std::set<Term>{T("h(a . f(a,b,c,d) . b)"), T("h(c . g(a,b,c,d) . d)")});
  CHECK(eh_variants(T("a . b")) == std::set<Term>{T("a . b")});
}

TEST_CASE("well-modedness of the collision theory") {
  ModeTable m = ModeTable::standard();
  auto eh = EquationalPresentation::e_h();
  CHECK(check_well_moded(eh, m).ok);

  ModeTable bad = ModeTable::standard();
  bad.mode[{Kind::Hash, 1}] = 1;
  auto rep = check_well_moded(eh, bad);
  CHECK(!rep.ok);
  CHECK(!rep.violations.empty());
}

TEST_CASE("well-modedness of small presentations") {
  ModeTable m = ModeTable::standard();
  Term x = Term::var("?x");
  EquationalPresentation unit("unit", {{Term::cat({x, Term::eps()}), x}});
  CHECK(check_well_moded(unit, m).ok);

  EquationalPresentation hx("hx", {{Term::hash(x), x}});
  auto rep = check_well_moded(hx, m);
  CHECK(!rep.ok);  // side signatures differ: 1 vs 0
}

TEST_CASE("presentation construction enforces invariants") {
  Term x = Term::var("?x"), y = Term::var("?y");
  CHECK_THROWS_AS(EquationalPresentation("bad", {{x, y}}), std::invalid_argument);
  CHECK_THROWS_AS(EquationalPresentation("bad", {{Term::cat({x, T("a")}), Term::cat({T("a"), x})}}),
                  std::invalid_argument);
}
